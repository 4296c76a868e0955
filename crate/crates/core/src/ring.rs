//! Quotient rings R = S/I with grading, Krull dimension, the alpha/gamma
//! bookkeeping for primes, and length computations at a prime.

use crate::error::{Error, Result};
use crate::gb::{generic_rank, Colength, IdealHandle, PolyVec};
use crate::poly::{PolyContext, Polynomial};
use std::sync::{Arc, OnceLock};

/// R = S/I. The defining ideal is held as an `IdealHandle` in the ambient
/// polynomial ring; the Krull dimension is cached write-once.
#[derive(Debug, Clone)]
pub struct QuotientRing {
    ctx: Arc<PolyContext>,
    ideal: IdealHandle,
    homogeneous: bool,
    dim: OnceLock<usize>,
}

impl QuotientRing {
    pub fn new(ctx: &Arc<PolyContext>, gens: Vec<Polynomial>) -> Result<Arc<QuotientRing>> {
        let ideal = IdealHandle::new(ctx, gens);
        let homogeneous = ideal.generators().iter().all(|g| g.is_homogeneous());
        if ideal.is_unit_ideal()? {
            return Err(Error::Invalid("defining ideal is the unit ideal".into()));
        }
        Ok(Arc::new(QuotientRing {
            ctx: ctx.clone(),
            ideal,
            homogeneous,
            dim: OnceLock::new(),
        }))
    }

    pub fn polynomial_ring(ctx: &Arc<PolyContext>) -> Arc<QuotientRing> {
        Arc::new(QuotientRing {
            ctx: ctx.clone(),
            ideal: IdealHandle::zero(ctx),
            homogeneous: true,
            dim: OnceLock::new(),
        })
    }

    pub fn context(&self) -> &Arc<PolyContext> {
        &self.ctx
    }

    pub fn ideal(&self) -> &IdealHandle {
        &self.ideal
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    /// The irrelevant maximal ideal (all variables).
    pub fn irrelevant_maximal(&self) -> IdealHandle {
        let gens = (0..self.ctx.nvars())
            .map(|i| Polynomial::variable(&self.ctx, i))
            .collect();
        IdealHandle::new(&self.ctx, gens)
    }

    /// Krull dimension via maximal variable sets independent modulo the
    /// leading-term ideal of I.
    pub fn dimension(&self) -> Result<usize> {
        if let Some(&d) = self.dim.get() {
            return Ok(d);
        }
        let d = dimension_of_quotient(&self.ideal)?;
        let _ = self.dim.set(d);
        Ok(d)
    }

    /// gamma(R) = dim R over a perfect prime coefficient field.
    pub fn gamma(&self) -> Result<usize> {
        self.dimension()
    }

    /// Normal form modulo the defining ideal.
    pub fn reduce(&self, f: &Polynomial) -> Result<Polynomial> {
        self.ideal.normal_form(f)
    }

    /// An ideal of R given by generators in S: the handle for J + I.
    pub fn ideal_in_r(&self, gens: Vec<Polynomial>) -> IdealHandle {
        let mut all = gens;
        all.extend(self.ideal.generators().iter().cloned());
        IdealHandle::new(&self.ctx, all)
    }

    /// lambda(R / J) for J an ideal of R (generators in S; I is folded in).
    pub fn colength_in_r(&self, j: &IdealHandle) -> Result<Colength> {
        self.ideal_in_r(j.generators().to_vec()).colength()
    }
}

/// Dimension of S/J computed from the leading-term ideal: the largest
/// cardinality of a variable subset meeting no leading-monomial support.
pub fn dimension_of_quotient(ideal: &IdealHandle) -> Result<usize> {
    let ctx = ideal.context();
    let n = ctx.nvars();
    let gb = ideal.gb()?;
    if gb.iter().any(|g| g.is_constant() && !g.is_zero()) {
        return Err(Error::Invalid("unit ideal has empty spectrum".into()));
    }
    let supports: Vec<Vec<usize>> = gb
        .iter()
        .filter_map(|g| g.leading_term())
        .map(|t| (0..n).filter(|&i| t.exps[i] > 0).collect())
        .collect();
    let mut best = 0usize;
    for mask in 0u32..(1 << n) {
        let vars: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        if vars.len() <= best {
            continue;
        }
        let independent = !supports
            .iter()
            .any(|s| !s.is_empty() && s.iter().all(|i| vars.contains(i)));
        if independent {
            best = vars.len();
        }
    }
    Ok(best)
}

/// Outcome of localizing at a prime that may kill the module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GammaLocal {
    Value(usize),
    LocalizationZero,
}

/// A prime of R: an ideal of S containing I, asserted prime by the caller.
/// alpha(P) = dim(R/P), which matches log_p of the residue-field degree of
/// the Frobenius for finitely generated algebras over the prime field.
#[derive(Debug, Clone)]
pub struct PrimeSpec {
    ring: Arc<QuotientRing>,
    ideal: IdealHandle,
    alpha: usize,
    maximal: bool,
    name: String,
}

impl PrimeSpec {
    /// `gens` generate the preimage of the prime in S; it must contain the
    /// defining ideal. The zero prime of a domain is `PrimeSpec::zero`.
    pub fn new(ring: &Arc<QuotientRing>, gens: Vec<Polynomial>, name: &str) -> Result<PrimeSpec> {
        let ideal = IdealHandle::new(ring.context(), gens);
        if !ideal.contains_ideal(ring.ideal())? {
            return Err(Error::Invalid(format!(
                "prime `{name}` does not contain the defining ideal"
            )));
        }
        if ideal.is_unit_ideal()? {
            return Err(Error::Invalid(format!("prime `{name}` is the unit ideal")));
        }
        let alpha = dimension_of_quotient(&ideal)?;
        let nvars = ring.context().nvars();
        let mut maximal = true;
        for i in 0..nvars {
            if !ideal.contains(&Polynomial::variable(ring.context(), i))? {
                maximal = false;
                break;
            }
        }
        Ok(PrimeSpec {
            ring: ring.clone(),
            ideal,
            alpha,
            maximal,
            name: name.to_string(),
        })
    }

    pub fn irrelevant(ring: &Arc<QuotientRing>) -> Result<PrimeSpec> {
        let gens = (0..ring.context().nvars())
            .map(|i| Polynomial::variable(ring.context(), i))
            .collect();
        PrimeSpec::new(ring, gens, "m")
    }

    /// The zero ideal of R (preimage I in S); valid only when R is a domain,
    /// which is asserted by the caller like every other primality claim.
    pub fn zero(ring: &Arc<QuotientRing>, name: &str) -> Result<PrimeSpec> {
        PrimeSpec::new(ring, ring.ideal().generators().to_vec(), name)
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn ideal(&self) -> &IdealHandle {
        &self.ideal
    }

    pub fn alpha(&self) -> usize {
        self.alpha
    }

    pub fn is_maximal(&self) -> bool {
        self.maximal
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        self.ideal.contains(f)
    }

    pub fn contains_prime(&self, other: &PrimeSpec) -> Result<bool> {
        self.ideal.contains_ideal(&other.ideal)
    }

    /// height(P) as dim R - dim R/P; exact on the catenary equidimensional
    /// corpus rings.
    pub fn height(&self) -> Result<usize> {
        Ok(self.ring.dimension()? - self.alpha)
    }
}

/// gamma of a localized module from the annotated minimal primes of its
/// annihilator: max dim(R/Q) over the components contained in P, or the
/// sentinel when none is (the localization vanishes).
pub fn gamma_local(components: &[IdealHandle], at: &PrimeSpec) -> Result<GammaLocal> {
    let mut best: Option<usize> = None;
    for q in components {
        if at.ideal().contains_ideal(q)? {
            let d = dimension_of_quotient(q)?;
            best = Some(best.map_or(d, |b: usize| b.max(d)));
        }
    }
    Ok(match best {
        Some(d) => GammaLocal::Value(d),
        None => GammaLocal::LocalizationZero,
    })
}

/// All degree-t products of the given generators (with repetition).
fn power_products(ctx: &Arc<PolyContext>, gens: &[Polynomial], t: usize) -> Vec<Polynomial> {
    if t == 0 {
        return vec![Polynomial::one(ctx)];
    }
    if gens.is_empty() {
        return Vec::new();
    }
    // products indexed by non-decreasing generator sequences
    fn rec(
        gens: &[Polynomial],
        from: usize,
        left: usize,
        acc: &Polynomial,
        out: &mut Vec<Polynomial>,
    ) {
        if left == 0 {
            out.push(acc.clone());
            return;
        }
        for i in from..gens.len() {
            rec(gens, i, left - 1, &acc.mul(&gens[i]), out);
        }
    }
    let mut out: Vec<Polynomial> = Vec::new();
    rec(gens, 0, t, &Polynomial::one(ctx), &mut out);
    out
}

/// Default cap on the number of associated-graded layers walked by
/// `length_at_prime`.
pub const LAYER_BOUND: usize = 64;

/// lambda over R_P of R_P / J_P, computed layer by layer along the P-adic
/// filtration: each layer (P^t + J)/(P^{t+1} + J) is an R/P-module whose
/// kappa(P)-dimension is generators minus the generic rank of its relation
/// matrix. Requires P minimal over J (otherwise the layers never vanish and
/// the bound trips).
pub fn length_at_prime(ring: &QuotientRing, j: &IdealHandle, at: &PrimeSpec) -> Result<u64> {
    let ctx = ring.context();
    let prime_s = at.ideal().plus(ring.ideal());
    for g in j.generators() {
        if !at.ideal().contains(g)? {
            return Err(Error::Invalid(
                "length_at_prime requires the ideal to lie inside the prime".into(),
            ));
        }
    }
    let pgens: Vec<Polynomial> = at.ideal().generators().to_vec();
    let mut total = 0u64;
    for t in 0..=LAYER_BOUND {
        let w = power_products(ctx, &pgens, t);
        if w.is_empty() {
            return Ok(total);
        }
        // relation module of the layer: coefficient vectors c with
        // sum c_i w_i inside P^{t+1} + J + I
        let mut k_gens = power_products(ctx, &pgens, t + 1);
        k_gens.extend(j.generators().iter().cloned());
        k_gens.extend(ring.ideal().generators().iter().cloned());
        let s = w.len();
        let mut vecs: Vec<PolyVec> = Vec::with_capacity(s + k_gens.len());
        for f in w.iter().chain(k_gens.iter()) {
            vecs.push(PolyVec::from_poly(f, 0, 1));
        }
        let syz = crate::gb::syzygies_of(ctx, &vecs)?;
        let rel_rows: Vec<Vec<Polynomial>> = syz
            .iter()
            .map(|v| (0..s as u32).map(|i| v.component(ctx, i)).collect())
            .collect();
        let rank = generic_rank(&rel_rows, &prime_s)?;
        let dim = s - rank;
        if dim == 0 {
            return Ok(total);
        }
        total += dim as u64;
    }
    Err(Error::NotCofinite { bound: LAYER_BOUND })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, MonomialOrder};

    fn ring(p: u64, vars: &[&str], gens: &[&str]) -> Arc<QuotientRing> {
        let ctx = PolyContext::new(p, vars, MonomialOrder::Grevlex).unwrap();
        let gens = gens
            .iter()
            .map(|s| parse_polynomial(&ctx, s).unwrap())
            .collect();
        QuotientRing::new(&ctx, gens).unwrap()
    }

    #[test]
    fn krull_dimension_examples() {
        assert_eq!(ring(2, &["x", "y"], &["x*y"]).dimension().unwrap(), 1);
        assert_eq!(
            ring(3, &["x", "y", "z"], &["x^2 - y*z"]).dimension().unwrap(),
            2
        );
        assert_eq!(ring(5, &["x"], &[]).dimension().unwrap(), 1);
        assert_eq!(ring(2, &["x", "y"], &[]).dimension().unwrap(), 2);
        assert_eq!(ring(2, &["x", "y"], &["x", "y"]).dimension().unwrap(), 0);
    }

    #[test]
    fn prime_alpha_and_maximality() {
        let r = ring(2, &["x", "y"], &["x*y"]);
        let ctx = r.context();
        let m = PrimeSpec::irrelevant(&r).unwrap();
        assert_eq!(m.alpha(), 0);
        assert!(m.is_maximal());
        let px = PrimeSpec::new(&r, vec![parse_polynomial(ctx, "x").unwrap()], "px").unwrap();
        assert_eq!(px.alpha(), 1);
        assert!(!px.is_maximal());
        assert!(m.contains_prime(&px).unwrap());
        assert!(!px.contains_prime(&m).unwrap());
        // alpha + height <= dim, equality on this chain
        assert_eq!(px.alpha() + px.height().unwrap(), r.dimension().unwrap());
    }

    #[test]
    fn prime_must_contain_defining_ideal() {
        let r = ring(3, &["x", "y", "z"], &["x^2 - y*z"]);
        let ctx = r.context();
        assert!(PrimeSpec::new(&r, vec![parse_polynomial(ctx, "x").unwrap()], "bad").is_err());
        let ok = PrimeSpec::new(
            &r,
            vec![
                parse_polynomial(ctx, "x").unwrap(),
                parse_polynomial(ctx, "y").unwrap(),
            ],
            "pxy",
        )
        .unwrap();
        assert_eq!(ok.alpha(), 1);
    }

    #[test]
    fn gamma_local_examples() {
        let r = ring(2, &["x", "y"], &["x*y"]);
        let ctx = r.context();
        let px = IdealHandle::new(ctx, vec![parse_polynomial(ctx, "x").unwrap()]);
        let py = IdealHandle::new(ctx, vec![parse_polynomial(ctx, "y").unwrap()]);
        let m = PrimeSpec::irrelevant(&r).unwrap();
        let at_y = PrimeSpec::new(&r, vec![parse_polynomial(ctx, "y").unwrap()], "py").unwrap();
        let at_x = PrimeSpec::new(&r, vec![parse_polynomial(ctx, "x").unwrap()], "px").unwrap();

        // M = R: components are the minimal primes (x), (y)
        assert_eq!(
            gamma_local(&[px.clone(), py.clone()], &m).unwrap(),
            GammaLocal::Value(1)
        );
        assert_eq!(
            gamma_local(&[px.clone(), py.clone()], &at_x).unwrap(),
            GammaLocal::Value(1)
        );
        // M = R/(x): single component (x); localizing at (y) kills it
        assert_eq!(
            gamma_local(&[px.clone()], &at_y).unwrap(),
            GammaLocal::LocalizationZero
        );
        assert_eq!(gamma_local(&[px], &m).unwrap(), GammaLocal::Value(1));
    }

    #[test]
    fn length_at_prime_examples() {
        let s2 = ring(5, &["x", "y"], &[]);
        let ctx = s2.context();
        let m = PrimeSpec::irrelevant(&s2).unwrap();

        let j1 = IdealHandle::new(
            ctx,
            vec![
                parse_polynomial(ctx, "x").unwrap(),
                parse_polynomial(ctx, "y").unwrap(),
            ],
        );
        assert_eq!(length_at_prime(&s2, &j1, &m).unwrap(), 1);

        let j2 = IdealHandle::new(
            ctx,
            vec![
                parse_polynomial(ctx, "x^2").unwrap(),
                parse_polynomial(ctx, "y").unwrap(),
            ],
        );
        assert_eq!(length_at_prime(&s2, &j2, &m).unwrap(), 2);

        // lambda over the discrete valuation ring S_(x)
        let px = PrimeSpec::new(&s2, vec![parse_polynomial(ctx, "x").unwrap()], "px").unwrap();
        let j3 = IdealHandle::new(ctx, vec![parse_polynomial(ctx, "x^2").unwrap()]);
        assert_eq!(length_at_prime(&s2, &j3, &px).unwrap(), 2);
    }

    #[test]
    fn length_at_prime_agrees_with_colength_at_m() {
        let r = ring(2, &["x", "y"], &["x*y"]);
        let ctx = r.context();
        let m = PrimeSpec::irrelevant(&r).unwrap();
        for gens in [vec!["x", "y"], vec!["x^2", "y^2"], vec!["x^3", "y"]] {
            let j = IdealHandle::new(
                ctx,
                gens.iter().map(|s| parse_polynomial(ctx, s).unwrap()).collect(),
            );
            let via_layers = length_at_prime(&r, &j, &m).unwrap();
            let via_staircase = r.colength_in_r(&j).unwrap().finite().unwrap();
            assert_eq!(via_layers, via_staircase);
        }
    }

    #[test]
    fn length_at_zero_prime_of_domain() {
        let r = ring(3, &["x", "y", "z"], &["x^2 - y*z"]);
        let zero = PrimeSpec::zero(&r, "zero").unwrap();
        assert_eq!(zero.alpha(), 2);
        let j = IdealHandle::zero(r.context());
        assert_eq!(length_at_prime(&r, &j, &zero).unwrap(), 1);
    }

    #[test]
    fn not_cofinite_guard() {
        let s2 = ring(2, &["x", "y"], &[]);
        let ctx = s2.context();
        // J = (x) is not cofinite at m
        let j = IdealHandle::new(ctx, vec![parse_polynomial(ctx, "x").unwrap()]);
        let m = PrimeSpec::irrelevant(&s2).unwrap();
        match length_at_prime(&s2, &j, &m) {
            Err(Error::NotCofinite { .. }) => {}
            other => panic!("expected NotCofinite, got {other:?}"),
        }
    }
}
