//! Buchberger engine for submodules of free modules S^n over the polynomial
//! ring. Ideals are the rank-1 case. Vector terms are ordered
//! position-over-term: lower position wins, ties decided by the context's
//! monomial order. Syzygies are computed by the block construction: run
//! Buchberger on (g_i | e_i) in S^(n+s) with the first block dominant, then
//! harvest the basis elements supported entirely in the trailing block.

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::{exp_div, exp_divides, exp_lcm, exp_mul, PolyContext, Polynomial};
use std::cmp::Ordering;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VTerm {
    pub pos: u32,
    pub exps: Vec<u32>,
    pub coeff: u64,
}

/// Element of a free module S^rank; terms sorted descending, leading first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyVec {
    pub rank: u32,
    pub terms: Vec<VTerm>,
}

impl PolyVec {
    pub fn zero(rank: u32) -> PolyVec {
        PolyVec {
            rank,
            terms: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&VTerm> {
        self.terms.first()
    }

    /// Wrap a polynomial as pos-th unit-vector multiple inside S^rank.
    pub fn from_poly(f: &Polynomial, pos: u32, rank: u32) -> PolyVec {
        let terms = f
            .terms()
            .iter()
            .map(|t| VTerm {
                pos,
                exps: t.exps.clone(),
                coeff: t.coeff,
            })
            .collect();
        PolyVec { rank, terms }
    }

    /// Component at `pos` as a polynomial.
    pub fn component(&self, ctx: &Arc<PolyContext>, pos: u32) -> Polynomial {
        let raw: Vec<(Vec<u32>, u64)> = self
            .terms
            .iter()
            .filter(|t| t.pos == pos)
            .map(|t| (t.exps.clone(), t.coeff))
            .collect();
        Polynomial::from_terms(ctx, raw)
    }

    pub fn from_columns(ctx: &Arc<PolyContext>, entries: &[Polynomial]) -> PolyVec {
        let rank = entries.len() as u32;
        let mut v = PolyVec::zero(rank);
        for (i, f) in entries.iter().enumerate() {
            v = add(ctx, &v, &PolyVec::from_poly(f, i as u32, rank));
        }
        v
    }

    /// All components as polynomials.
    pub fn to_columns(&self, ctx: &Arc<PolyContext>) -> Vec<Polynomial> {
        (0..self.rank).map(|i| self.component(ctx, i)).collect()
    }

    /// Keep positions in [from, to), shifting to start at 0.
    pub fn slice_positions(&self, from: u32, to: u32) -> PolyVec {
        PolyVec {
            rank: to - from,
            terms: self
                .terms
                .iter()
                .filter(|t| t.pos >= from && t.pos < to)
                .map(|t| VTerm {
                    pos: t.pos - from,
                    exps: t.exps.clone(),
                    coeff: t.coeff,
                })
                .collect(),
        }
    }

    pub fn max_pos(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.pos).max()
    }
}

#[inline]
pub(crate) fn cmp_vterm(ctx: &PolyContext, a: (u32, &[u32]), b: (u32, &[u32])) -> Ordering {
    // position-over-term: lower position is greater
    match b.0.cmp(&a.0) {
        Ordering::Equal => ctx.cmp_exps(a.1, b.1),
        o => o,
    }
}

pub(crate) fn add(ctx: &Arc<PolyContext>, u: &PolyVec, v: &PolyVec) -> PolyVec {
    debug_assert_eq!(u.rank, v.rank);
    let p = ctx.p();
    let mut out = Vec::with_capacity(u.terms.len() + v.terms.len());
    let (mut i, mut j) = (0, 0);
    while i < u.terms.len() && j < v.terms.len() {
        let a = &u.terms[i];
        let b = &v.terms[j];
        match cmp_vterm(ctx, (a.pos, &a.exps), (b.pos, &b.exps)) {
            Ordering::Greater => {
                out.push(a.clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b.clone());
                j += 1;
            }
            Ordering::Equal => {
                let c = arith::add(a.coeff, b.coeff, p);
                if c != 0 {
                    out.push(VTerm {
                        pos: a.pos,
                        exps: a.exps.clone(),
                        coeff: c,
                    });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&u.terms[i..]);
    out.extend_from_slice(&v.terms[j..]);
    PolyVec {
        rank: u.rank,
        terms: out,
    }
}

pub(crate) fn scale_term(ctx: &Arc<PolyContext>, v: &PolyVec, m: &[u32], c: u64) -> PolyVec {
    let p = ctx.p();
    let c = c % p;
    if c == 0 {
        return PolyVec::zero(v.rank);
    }
    PolyVec {
        rank: v.rank,
        terms: v
            .terms
            .iter()
            .map(|t| VTerm {
                pos: t.pos,
                exps: exp_mul(&t.exps, m),
                coeff: arith::mul(t.coeff, c, p),
            })
            .collect(),
    }
}

pub(crate) fn mul_poly(ctx: &Arc<PolyContext>, v: &PolyVec, f: &Polynomial) -> PolyVec {
    let mut acc = PolyVec::zero(v.rank);
    for t in f.terms() {
        acc = add(ctx, &acc, &scale_term(ctx, v, &t.exps, t.coeff));
    }
    acc
}

/// Budget meter: counts reducer applications within one top-level call.
pub struct Meter {
    used: u64,
    limit: u64,
    operation: &'static str,
}

impl Meter {
    pub fn new(ctx: &PolyContext, operation: &'static str) -> Meter {
        Meter {
            used: 0,
            limit: ctx.budget(),
            operation,
        }
    }

    #[inline]
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::BudgetExceeded {
                operation: self.operation,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// Full normal form of `v` against `basis`: no remaining term is divisible by
/// a leading term of the basis. Reducer choice is the first match in basis
/// order, so the result is deterministic for a fixed basis.
pub(crate) fn normal_form(
    ctx: &Arc<PolyContext>,
    v: &PolyVec,
    basis: &[PolyVec],
    meter: &mut Meter,
) -> Result<PolyVec> {
    let p = ctx.p();
    let mut rem = v.clone();
    let mut out: Vec<VTerm> = Vec::new();
    'outer: while let Some(t0) = rem.lead() {
        for g in basis {
            let lt = match g.lead() {
                Some(lt) => lt,
                None => continue,
            };
            if lt.pos == t0.pos && exp_divides(&lt.exps, &t0.exps) {
                meter.tick()?;
                let m = exp_div(&t0.exps, &lt.exps).unwrap();
                let c = arith::mul(t0.coeff, arith::inv(lt.coeff, p), p);
                let c = arith::neg(c, p);
                rem = add(ctx, &rem, &scale_term(ctx, g, &m, c));
                continue 'outer;
            }
        }
        // irreducible leading term: move it to the output
        out.push(rem.terms.remove(0));
    }
    Ok(PolyVec {
        rank: v.rank,
        terms: out,
    })
}

struct Pair {
    i: usize,
    j: usize,
    lcm_deg: u64,
    sugar: u64,
}

fn pair_of(gi: &PolyVec, gj: &PolyVec, i: usize, j: usize, deg: &[u64]) -> Option<Pair> {
    let a = gi.lead()?;
    let b = gj.lead()?;
    if a.pos != b.pos {
        return None;
    }
    let lcm = exp_lcm(&a.exps, &b.exps);
    let lcm_deg: u64 = lcm.iter().map(|&e| e as u64).sum();
    let la: u64 = a.exps.iter().map(|&e| e as u64).sum();
    let lb: u64 = b.exps.iter().map(|&e| e as u64).sum();
    let sugar = (deg[i] + lcm_deg - la).max(deg[j] + lcm_deg - lb);
    Some(Pair {
        i,
        j,
        lcm_deg,
        sugar,
    })
}

fn total_deg_vec(v: &PolyVec) -> u64 {
    v.terms
        .iter()
        .map(|t| t.exps.iter().map(|&e| e as u64).sum())
        .max()
        .unwrap_or(0)
}

/// In-progress Buchberger computation; generators can be added after the
/// pair queue has drained, which keeps the graded Nakayama selection loop
/// incremental.
pub(crate) struct BuchState {
    basis: Vec<PolyVec>,
    deg: Vec<u64>,
    pairs: Vec<Pair>,
    use_product_criterion: bool,
}

impl BuchState {
    pub(crate) fn new(use_product_criterion: bool) -> BuchState {
        BuchState {
            basis: Vec::new(),
            deg: Vec::new(),
            pairs: Vec::new(),
            use_product_criterion,
        }
    }

    pub(crate) fn basis(&self) -> &[PolyVec] {
        &self.basis
    }

    pub(crate) fn add_generator(
        &mut self,
        ctx: &Arc<PolyContext>,
        g: &PolyVec,
        meter: &mut Meter,
    ) -> Result<()> {
        let nf = normal_form(ctx, g, &self.basis, meter)?;
        if nf.is_zero() {
            return Ok(());
        }
        let k = self.basis.len();
        self.deg.push(total_deg_vec(&nf));
        self.basis.push(nf);
        for l in 0..k {
            if let Some(pr) = pair_of(&self.basis[l], &self.basis[k], l, k, &self.deg) {
                self.pairs.push(pr);
            }
        }
        Ok(())
    }

    /// Drain the pair queue with the normal strategy: smallest lcm degree,
    /// then sugar, then indices.
    pub(crate) fn complete(&mut self, ctx: &Arc<PolyContext>, meter: &mut Meter) -> Result<()> {
        while !self.pairs.is_empty() {
            let best = self
                .pairs
                .iter()
                .enumerate()
                .min_by_key(|(_, p)| (p.lcm_deg, p.sugar, p.i, p.j))
                .map(|(k, _)| k)
                .unwrap();
            let Pair { i, j, .. } = self.pairs.swap_remove(best);
            let (lt_i, lt_j) = (
                self.basis[i].lead().unwrap().clone(),
                self.basis[j].lead().unwrap().clone(),
            );
            if self.use_product_criterion
                && self.basis[i].rank == 1
                && lt_i
                    .exps
                    .iter()
                    .zip(lt_j.exps.iter())
                    .all(|(&a, &b)| a.min(b) == 0)
            {
                continue;
            }
            let lcm = exp_lcm(&lt_i.exps, &lt_j.exps);
            let mi = exp_div(&lcm, &lt_i.exps).unwrap();
            let mj = exp_div(&lcm, &lt_j.exps).unwrap();
            let p = ctx.p();
            let ci = arith::inv(lt_i.coeff, p);
            let cj = arith::neg(arith::inv(lt_j.coeff, p), p);
            let s = add(
                ctx,
                &scale_term(ctx, &self.basis[i], &mi, ci),
                &scale_term(ctx, &self.basis[j], &mj, cj),
            );
            let nf = normal_form(ctx, &s, &self.basis, meter)?;
            if !nf.is_zero() {
                let k = self.basis.len();
                self.deg.push(total_deg_vec(&nf));
                self.basis.push(nf);
                for l in 0..k {
                    if let Some(pr) = pair_of(&self.basis[l], &self.basis[k], l, k, &self.deg) {
                        self.pairs.push(pr);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Buchberger with normal strategy (minimal lcm degree, sugar tiebreak).
/// `use_product_criterion` must stay off for syzygy extraction and for any
/// rank > 1 input, where the criterion is not valid.
pub(crate) fn buchberger(
    ctx: &Arc<PolyContext>,
    gens: &[PolyVec],
    meter: &mut Meter,
    use_product_criterion: bool,
) -> Result<Vec<PolyVec>> {
    let mut state = BuchState::new(use_product_criterion);
    for g in gens {
        state.add_generator(ctx, g, meter)?;
    }
    state.complete(ctx, meter)?;
    Ok(state.basis)
}

/// Inter-reduce to the unique reduced basis: leading terms pairwise
/// indivisible, every element fully reduced against the others, monic,
/// sorted ascending by leading term.
pub(crate) fn reduce_basis(
    ctx: &Arc<PolyContext>,
    mut basis: Vec<PolyVec>,
    meter: &mut Meter,
) -> Result<Vec<PolyVec>> {
    let p = ctx.p();
    // drop elements whose lead is divisible by another's lead
    let mut keep: Vec<PolyVec> = Vec::new();
    'next: for (i, g) in basis.iter().enumerate() {
        let lt = match g.lead() {
            Some(lt) => lt,
            None => continue,
        };
        for (j, h) in basis.iter().enumerate() {
            if i == j {
                continue;
            }
            if let Some(lh) = h.lead() {
                if lh.pos == lt.pos && exp_divides(&lh.exps, &lt.exps) {
                    // on exact tie keep the earlier element
                    if lh.exps != lt.exps || j < i {
                        continue 'next;
                    }
                }
            }
        }
        keep.push(g.clone());
    }
    basis = keep;
    // tail-reduce each against the rest until stable
    loop {
        let mut changed = false;
        for i in 0..basis.len() {
            let g = basis[i].clone();
            let others: Vec<PolyVec> = basis
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, h)| h.clone())
                .collect();
            let nf = normal_form(ctx, &g, &others, meter)?;
            if nf != g {
                changed = true;
                basis[i] = nf;
            }
        }
        basis.retain(|g| !g.is_zero());
        if !changed {
            break;
        }
    }
    for g in basis.iter_mut() {
        if let Some(lt) = g.lead() {
            let inv = arith::inv(lt.coeff, p);
            *g = scale_term(ctx, g, &vec![0; ctx.nvars()], inv);
        }
    }
    basis.sort_by(|a, b| {
        let (la, lb) = (a.lead().unwrap(), b.lead().unwrap());
        cmp_vterm(ctx, (la.pos, &la.exps), (lb.pos, &lb.exps))
    });
    Ok(basis)
}

/// Reduced Groebner basis of the submodule generated by `gens`.
pub(crate) fn reduced_gb(
    ctx: &Arc<PolyContext>,
    gens: &[PolyVec],
    meter: &mut Meter,
) -> Result<Vec<PolyVec>> {
    let rank1 = gens.iter().all(|g| g.rank == 1);
    let basis = buchberger(ctx, gens, meter, rank1)?;
    reduce_basis(ctx, basis, meter)
}

/// Generators of the syzygy module of `gens` inside S^s, s = gens.len().
/// The target positions dominate the tag positions, so the Groebner elements
/// supported in the tag block form a basis of the kernel.
pub(crate) fn syzygies(
    ctx: &Arc<PolyContext>,
    gens: &[PolyVec],
    meter: &mut Meter,
) -> Result<Vec<PolyVec>> {
    let s = gens.len() as u32;
    if s == 0 {
        return Ok(Vec::new());
    }
    let n = gens[0].rank;
    let graph: Vec<PolyVec> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut terms: Vec<VTerm> = g.terms.clone();
            terms.push(VTerm {
                pos: n + i as u32,
                exps: vec![0; ctx.nvars()],
                coeff: 1,
            });
            // tag term sorts after all target-block terms under POT
            PolyVec { rank: n + s, terms }
        })
        .collect();
    let basis = buchberger(ctx, &graph, meter, false)?;
    let mut syz: Vec<PolyVec> = basis
        .iter()
        .filter(|v| v.terms.iter().all(|t| t.pos >= n))
        .map(|v| v.slice_positions(n, n + s))
        .collect();
    syz = reduce_basis(ctx, syz, meter)?;
    Ok(syz)
}
