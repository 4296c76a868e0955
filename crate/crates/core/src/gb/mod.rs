//! Groebner layer: ideal and submodule handles with cached reduced bases,
//! normal forms, colon, intersection, staircase counting and generic rank.

mod engine;
mod rank;

pub use engine::{Meter, PolyVec, VTerm};
pub use rank::generic_rank;

pub(crate) use engine::{add as vec_add, cmp_vterm as cmp_vterm_pub, mul_poly as vec_mul_poly};

use crate::error::Result;
use crate::poly::{exp_divides, MonomialOrder, PolyContext, Polynomial};
use std::sync::{Arc, OnceLock};

/// Number of standard monomials of an ideal or module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Colength {
    Finite(u64),
    Infinite,
}

impl Colength {
    pub fn finite(self) -> Option<u64> {
        match self {
            Colength::Finite(n) => Some(n),
            Colength::Infinite => None,
        }
    }
}

/// An ideal of the ambient polynomial ring with a write-once cached reduced
/// Groebner basis. Concurrent readers share the cache; the first caller
/// computes.
#[derive(Debug)]
pub struct IdealHandle {
    ctx: Arc<PolyContext>,
    gens: Vec<Polynomial>,
    cache: OnceLock<Result<Arc<Vec<Polynomial>>>>,
}

impl Clone for IdealHandle {
    fn clone(&self) -> Self {
        let cache = OnceLock::new();
        if let Some(v) = self.cache.get() {
            let _ = cache.set(v.clone());
        }
        IdealHandle {
            ctx: self.ctx.clone(),
            gens: self.gens.clone(),
            cache,
        }
    }
}

impl IdealHandle {
    pub fn new(ctx: &Arc<PolyContext>, gens: Vec<Polynomial>) -> IdealHandle {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        IdealHandle {
            ctx: ctx.clone(),
            gens,
            cache: OnceLock::new(),
        }
    }

    pub fn zero(ctx: &Arc<PolyContext>) -> IdealHandle {
        IdealHandle::new(ctx, Vec::new())
    }

    pub fn unit(ctx: &Arc<PolyContext>) -> IdealHandle {
        IdealHandle::new(ctx, vec![Polynomial::one(ctx)])
    }

    pub fn context(&self) -> &Arc<PolyContext> {
        &self.ctx
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.gens.is_empty()
    }

    /// The unique reduced Groebner basis under the context order.
    pub fn gb(&self) -> Result<Arc<Vec<Polynomial>>> {
        self.cache
            .get_or_init(|| {
                let mut meter = Meter::new(&self.ctx, "groebner_basis");
                let vecs: Vec<PolyVec> = self
                    .gens
                    .iter()
                    .map(|g| PolyVec::from_poly(g, 0, 1))
                    .collect();
                let basis = engine::reduced_gb(&self.ctx, &vecs, &mut meter)?;
                Ok(Arc::new(
                    basis
                        .iter()
                        .map(|v| v.component(&self.ctx, 0))
                        .collect::<Vec<_>>(),
                ))
            })
            .clone()
    }

    /// Canonical remainder; zero iff the element lies in the ideal.
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        let gb = self.gb()?;
        let mut meter = Meter::new(&self.ctx, "normal_form");
        let basis: Vec<PolyVec> = gb.iter().map(|g| PolyVec::from_poly(g, 0, 1)).collect();
        let v = PolyVec::from_poly(f, 0, 1);
        let nf = engine::normal_form(&self.ctx, &v, &basis, &mut meter)?;
        Ok(nf.component(&self.ctx, 0))
    }

    pub fn contains(&self, f: &Polynomial) -> Result<bool> {
        Ok(self.normal_form(f)?.is_zero())
    }

    pub fn is_unit_ideal(&self) -> Result<bool> {
        self.contains(&Polynomial::one(&self.ctx))
    }

    pub fn contains_ideal(&self, other: &IdealHandle) -> Result<bool> {
        for g in other.generators() {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Ideal equality via the canonical bases.
    pub fn equals(&self, other: &IdealHandle) -> Result<bool> {
        Ok(*self.gb()? == *other.gb()?)
    }

    /// Sum of ideals (concatenated generators).
    pub fn plus(&self, other: &IdealHandle) -> IdealHandle {
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        IdealHandle::new(&self.ctx, gens)
    }

    /// Colon by a single element: the first coordinates of the syzygies of
    /// (g, f_1, ..., f_s) generate { r : r g inside the ideal }.
    pub fn colon_element(&self, g: &Polynomial) -> Result<IdealHandle> {
        if g.is_zero() {
            return Ok(IdealHandle::unit(&self.ctx));
        }
        if self.gens.is_empty() {
            // (0 : g) with g nonzero over a domain
            return Ok(IdealHandle::zero(&self.ctx));
        }
        let mut vecs = vec![PolyVec::from_poly(g, 0, 1)];
        vecs.extend(self.gens.iter().map(|f| PolyVec::from_poly(f, 0, 1)));
        let mut meter = Meter::new(&self.ctx, "colon");
        let syz = engine::syzygies(&self.ctx, &vecs, &mut meter)?;
        let gens: Vec<Polynomial> = syz
            .iter()
            .map(|v| v.component(&self.ctx, 0))
            .filter(|f| !f.is_zero())
            .collect();
        let out = IdealHandle::new(&self.ctx, gens);
        out.interreduced()
    }

    /// Ideal quotient (I : J), the intersection of the element colons.
    pub fn colon(&self, other: &IdealHandle) -> Result<IdealHandle> {
        if other.gens.is_empty() {
            return Ok(IdealHandle::unit(&self.ctx));
        }
        let mut acc: Option<IdealHandle> = None;
        for g in &other.gens {
            let c = self.colon_element(g)?;
            acc = Some(match acc {
                None => c,
                Some(prev) => prev.intersect(&c)?,
            });
        }
        Ok(acc.unwrap())
    }

    /// Intersection via elimination over one auxiliary variable:
    /// (t I + (1 - t) J) with t eliminated.
    pub fn intersect(&self, other: &IdealHandle) -> Result<IdealHandle> {
        if self.gens.is_empty() || other.gens.is_empty() {
            return Ok(IdealHandle::zero(&self.ctx));
        }
        let n = self.ctx.nvars();
        let aux_name = fresh_aux_name(&self.ctx);
        let ectx = self
            .ctx
            .with_order(MonomialOrder::Elim { n_aux: 1 }, &[&aux_name]);
        let t = Polynomial::variable(&ectx, n);
        let one_minus_t = Polynomial::one(&ectx).sub(&t);
        let mut gens: Vec<Polynomial> = Vec::new();
        for f in &self.gens {
            gens.push(f.extend_to(&ectx).mul(&t));
        }
        for g in &other.gens {
            gens.push(g.extend_to(&ectx).mul(&one_minus_t));
        }
        let mut meter = Meter::new(&ectx, "intersect");
        let vecs: Vec<PolyVec> = gens.iter().map(|g| PolyVec::from_poly(g, 0, 1)).collect();
        let basis = engine::reduced_gb(&ectx, &vecs, &mut meter)?;
        let kept: Vec<Polynomial> = basis
            .iter()
            .map(|v| v.component(&ectx, 0))
            .filter(|f| f.terms().iter().all(|tm| tm.exps[n] == 0))
            .map(|f| f.restrict_to(&self.ctx))
            .collect();
        let out = IdealHandle::new(&self.ctx, kept);
        out.interreduced()
    }

    /// Replace the generators by the reduced Groebner basis (canonical form).
    pub fn interreduced(&self) -> Result<IdealHandle> {
        let gb = self.gb()?;
        let out = IdealHandle::new(&self.ctx, (*gb).clone());
        let _ = out.cache.set(Ok(gb));
        Ok(out)
    }

    /// Number of monomials outside the leading-term ideal.
    pub fn colength(&self) -> Result<Colength> {
        let gb = self.gb()?;
        let leads: Vec<Vec<u32>> = gb
            .iter()
            .filter_map(|g| g.leading_term().map(|t| t.exps.clone()))
            .collect();
        Ok(staircase_count(self.ctx.nvars(), &leads))
    }
}

pub(crate) fn fresh_aux_name(ctx: &PolyContext) -> String {
    let mut name = "t_elim".to_string();
    while ctx.var_index(&name).is_some() {
        name.push('_');
    }
    name
}

/// Count lattice points below the staircase of the given leading exponents.
pub(crate) fn staircase_count(nvars: usize, leads: &[Vec<u32>]) -> Colength {
    if leads.iter().any(|l| l.iter().all(|&e| e == 0)) {
        return Colength::Finite(0); // unit ideal
    }
    if nvars == 0 {
        return Colength::Finite(1);
    }
    // box bound from pure-power leading terms
    let mut bound = vec![None::<u32>; nvars];
    for l in leads {
        let support: Vec<usize> = (0..nvars).filter(|&i| l[i] > 0).collect();
        if support.len() == 1 {
            let i = support[0];
            bound[i] = Some(bound[i].map_or(l[i], |b: u32| b.min(l[i])));
        }
    }
    if bound.iter().any(|b| b.is_none()) {
        return Colength::Infinite;
    }
    let bound: Vec<u32> = bound.into_iter().map(|b| b.unwrap()).collect();
    let mut count = 0u64;
    let mut point = vec![0u32; nvars];
    loop {
        if !leads.iter().any(|l| exp_divides(l, &point)) {
            count += 1;
        }
        // advance odometer
        let mut i = 0;
        loop {
            if i == nvars {
                return Colength::Finite(count);
            }
            point[i] += 1;
            if point[i] < bound[i] {
                break;
            }
            point[i] = 0;
            i += 1;
        }
    }
}

/// A submodule of a free module S^rank with the same caching discipline as
/// `IdealHandle`.
#[derive(Debug)]
pub struct SubmoduleHandle {
    ctx: Arc<PolyContext>,
    rank: u32,
    gens: Vec<PolyVec>,
    cache: OnceLock<Result<Arc<Vec<PolyVec>>>>,
}

impl SubmoduleHandle {
    pub fn new(ctx: &Arc<PolyContext>, rank: u32, gens: Vec<PolyVec>) -> SubmoduleHandle {
        let gens: Vec<PolyVec> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        debug_assert!(gens.iter().all(|g| g.rank == rank));
        SubmoduleHandle {
            ctx: ctx.clone(),
            rank,
            gens,
            cache: OnceLock::new(),
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn generators(&self) -> &[PolyVec] {
        &self.gens
    }

    pub fn gb(&self) -> Result<Arc<Vec<PolyVec>>> {
        self.cache
            .get_or_init(|| {
                let mut meter = Meter::new(&self.ctx, "module_groebner_basis");
                Ok(Arc::new(engine::reduced_gb(
                    &self.ctx, &self.gens, &mut meter,
                )?))
            })
            .clone()
    }

    pub fn normal_form(&self, v: &PolyVec) -> Result<PolyVec> {
        let gb = self.gb()?;
        let mut meter = Meter::new(&self.ctx, "module_normal_form");
        engine::normal_form(&self.ctx, v, &gb, &mut meter)
    }

    pub fn contains(&self, v: &PolyVec) -> Result<bool> {
        Ok(self.normal_form(v)?.is_zero())
    }

    /// Kernel of the map S^s -> S^rank defined by the generators as columns.
    pub fn syzygies(&self) -> Result<Vec<PolyVec>> {
        let mut meter = Meter::new(&self.ctx, "syzygies");
        engine::syzygies(&self.ctx, &self.gens, &mut meter)
    }

    /// Standard module monomials outside the leading-term module.
    pub fn colength(&self) -> Result<Colength> {
        let gb = self.gb()?;
        let nvars = self.ctx.nvars();
        let mut total = 0u64;
        for pos in 0..self.rank {
            let leads: Vec<Vec<u32>> = gb
                .iter()
                .filter_map(|v| v.lead())
                .filter(|t| t.pos == pos)
                .map(|t| t.exps.clone())
                .collect();
            match staircase_count(nvars, &leads) {
                Colength::Finite(c) => total += c,
                Colength::Infinite => return Ok(Colength::Infinite),
            }
        }
        Ok(Colength::Finite(total))
    }
}

/// Bracket power of an ideal: the handle generated by the q-th powers of
/// the generators.
pub fn bracket_for_ideal(ideal: &IdealHandle, e: u32) -> crate::error::Result<IdealHandle> {
    Ok(IdealHandle::new(
        ideal.context(),
        crate::poly::bracket_power_ideal(ideal.generators(), e)?,
    ))
}

/// Syzygies of an explicit generator list. Unlike `SubmoduleHandle`, zero
/// generators are kept: their coordinates are free and contribute unit
/// syzygies, and dropping them would shift the indexing.
pub fn syzygies_of(ctx: &Arc<PolyContext>, gens: &[PolyVec]) -> Result<Vec<PolyVec>> {
    let mut meter = Meter::new(ctx, "syzygies");
    engine::syzygies(ctx, gens, &mut meter)
}

/// Incrementally extendable module Groebner basis, used by the graded
/// Nakayama generator selection: membership tests interleave with adding
/// accepted generators.
pub struct IncrementalGb {
    ctx: Arc<PolyContext>,
    state: engine::BuchState,
    meter: Meter,
}

impl IncrementalGb {
    pub fn new(ctx: &Arc<PolyContext>, gens: &[PolyVec]) -> Result<IncrementalGb> {
        let mut meter = Meter::new(ctx, "incremental_groebner");
        let mut state = engine::BuchState::new(false);
        for g in gens {
            state.add_generator(ctx, g, &mut meter)?;
        }
        state.complete(ctx, &mut meter)?;
        Ok(IncrementalGb {
            ctx: ctx.clone(),
            state,
            meter,
        })
    }

    pub fn reduces_to_zero(&mut self, v: &PolyVec) -> Result<bool> {
        Ok(engine::normal_form(&self.ctx, v, self.state.basis(), &mut self.meter)?.is_zero())
    }

    pub fn add_generator(&mut self, v: &PolyVec) -> Result<()> {
        self.state.add_generator(&self.ctx, v, &mut self.meter)?;
        self.state.complete(&self.ctx, &mut self.meter)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_polynomial;

    fn ctx(p: u64, vars: &[&str]) -> Arc<PolyContext> {
        PolyContext::new(p, vars, MonomialOrder::Grevlex).unwrap()
    }

    fn ideal(ctx: &Arc<PolyContext>, gens: &[&str]) -> IdealHandle {
        IdealHandle::new(
            ctx,
            gens.iter()
                .map(|s| parse_polynomial(ctx, s).unwrap())
                .collect(),
        )
    }

    #[test]
    fn normal_form_examples() {
        let c = ctx(3, &["x", "y", "z"]);
        let i1 = ideal(&c, &["x^2 - y*z"]);
        let f = parse_polynomial(&c, "x^2").unwrap();
        assert_eq!(i1.normal_form(&f).unwrap().to_string(), "y*z");

        let i2 = ideal(&c, &["x"]);
        assert!(i2.contains(&parse_polynomial(&c, "x").unwrap()).unwrap());

        let i3 = ideal(&c, &["x^2 - y*z", "x^3", "y^3", "z^3"]);
        assert!(i3
            .contains(&parse_polynomial(&c, "y^2*z^2").unwrap())
            .unwrap());
    }

    #[test]
    fn colon_examples() {
        let c = ctx(2, &["x", "y"]);
        let xy = parse_polynomial(&c, "x*y").unwrap();

        let i1 = ideal(&c, &["x^2*y^2"]);
        let q1 = i1.colon_element(&xy).unwrap();
        assert!(q1.equals(&ideal(&c, &["x*y"])).unwrap());

        let i2 = ideal(&c, &["x^2", "y^2"]);
        let q2 = i2.colon_element(&xy).unwrap();
        assert!(q2.equals(&ideal(&c, &["x", "y"])).unwrap());

        let i3 = ideal(&c, &["x^2", "y^2", "x^2*y^2"]);
        let q3 = i3.colon(&ideal(&c, &["x*y"])).unwrap();
        assert!(q3.equals(&ideal(&c, &["x", "y"])).unwrap());

        // membership verification: g * J inside I for each returned g
        for g in q2.generators() {
            assert!(i2.contains(&g.mul(&xy)).unwrap());
        }
    }

    #[test]
    fn intersect_examples() {
        let c = ctx(3, &["x", "y"]);
        let a = ideal(&c, &["x"]);
        let b = ideal(&c, &["y"]);
        assert!(a
            .intersect(&b)
            .unwrap()
            .equals(&ideal(&c, &["x*y"]))
            .unwrap());

        let m = ideal(&c, &["x", "y"]);
        assert!(m.intersect(&m).unwrap().equals(&m).unwrap());

        let xyy = ideal(&c, &["x", "y^2"]);
        assert!(a.intersect(&xyy).unwrap().equals(&a).unwrap());
    }

    #[test]
    fn colength_examples() {
        let c = ctx(2, &["x", "y"]);
        let i1 = ideal(&c, &["x^2", "y^2", "x*y"]);
        assert_eq!(i1.colength().unwrap(), Colength::Finite(3));

        for q in [2u32, 4, 8] {
            let gens = [
                format!("x^{q}"),
                format!("y^{q}"),
                "x*y".to_string(),
            ];
            let refs: Vec<&str> = gens.iter().map(|s| s.as_str()).collect();
            let i = ideal(&c, &refs);
            assert_eq!(
                i.colength().unwrap(),
                Colength::Finite(2 * q as u64 - 1),
                "staircase of (x^q, y^q, xy)"
            );
        }

        let i2 = ideal(&c, &["x"]);
        assert_eq!(i2.colength().unwrap(), Colength::Infinite);
    }

    #[test]
    fn buchberger_criterion_spot_check() {
        // every S-pair of the returned basis reduces to zero
        let c = ctx(3, &["x", "y", "z"]);
        let i = ideal(&c, &["x^2 - y*z", "x^3", "y^3", "z^3", "x*y^2 - z^2"]);
        let gb = i.gb().unwrap();
        let handle = IdealHandle::new(&c, (*gb).clone());
        for a in gb.iter() {
            for b in gb.iter() {
                let la = a.leading_term().unwrap();
                let lb = b.leading_term().unwrap();
                let lcm = crate::poly::exp_lcm(&la.exps, &lb.exps);
                let ma = crate::poly::exp_div(&lcm, &la.exps).unwrap();
                let mb = crate::poly::exp_div(&lcm, &lb.exps).unwrap();
                let s = a
                    .mul_term(&ma, crate::arith::inv(la.coeff, 3))
                    .sub(&b.mul_term(&mb, crate::arith::inv(lb.coeff, 3)));
                assert!(s.is_zero() || handle.contains(&s).unwrap());
            }
        }
    }

    #[test]
    fn colon_and_intersect_random_membership() {
        let c = ctx(3, &["x", "y", "z"]);
        let i = ideal(&c, &["x^2", "y^3"]);
        let j = ideal(&c, &["x*y", "z"]);
        let q = i.colon(&j).unwrap();
        for g in q.generators() {
            for h in j.generators() {
                assert!(i.contains(&g.mul(h)).unwrap());
            }
        }
        let meet = i.intersect(&j).unwrap();
        for g in meet.generators() {
            assert!(i.contains(g).unwrap());
            assert!(j.contains(g).unwrap());
        }
    }

    #[test]
    fn zero_and_unit_edge_cases() {
        let c = ctx(2, &["x", "y"]);
        let zero = IdealHandle::zero(&c);
        let j = ideal(&c, &["x"]);
        assert!(zero.colon(&j).unwrap().is_zero_ideal());
        assert!(j.colon(&zero).unwrap().is_unit_ideal().unwrap());
        assert!(zero.intersect(&j).unwrap().is_zero_ideal());
        assert_eq!(IdealHandle::unit(&c).colength().unwrap(), Colength::Finite(0));
        assert_eq!(zero.colength().unwrap(), Colength::Infinite);
    }
}
