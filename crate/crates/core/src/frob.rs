//! Frobenius pushforwards F^e_* R and F^e_* M as finitely presented
//! Q-graded modules, built from the digit decomposition.

use crate::error::{Error, Result};
use crate::gb::{Colength, IdealHandle, PolyVec, SubmoduleHandle, VTerm};
use crate::poly::{frobenius_decompose, q_power, Polynomial};
use crate::ring::QuotientRing;
use num_rational::Rational64;
use std::sync::Arc;

/// Default cap on the number of generators a pushforward presentation may
/// have. p^(e n) grows fast; exceeding the cap is an explicit error.
pub const SIZE_GUARD: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Pushforward(u32),
    Syzygy,
    User,
}

/// A finitely presented Q-graded module over R: generator degrees plus a
/// relation matrix whose columns are vectors over S with entries reduced
/// mod I. The cokernel of the matrix is the module.
#[derive(Debug, Clone)]
pub struct GradedModule {
    ring: Arc<QuotientRing>,
    gen_degrees: Vec<Rational64>,
    relations: Vec<PolyVec>,
    provenance: Provenance,
}

impl GradedModule {
    pub fn new(
        ring: &Arc<QuotientRing>,
        gen_degrees: Vec<Rational64>,
        relation_columns: Vec<Vec<Polynomial>>,
        provenance: Provenance,
    ) -> Result<GradedModule> {
        let rank = gen_degrees.len() as u32;
        let mut relations = Vec::with_capacity(relation_columns.len());
        for col in &relation_columns {
            if col.len() != rank as usize {
                return Err(Error::Invalid(
                    "relation column length must match generator count".into(),
                ));
            }
            let reduced: Result<Vec<Polynomial>> =
                col.iter().map(|f| ring.reduce(f)).collect();
            let v = PolyVec::from_columns(ring.context(), &reduced?);
            if !v.is_zero() {
                relations.push(v);
            }
        }
        let m = GradedModule {
            ring: ring.clone(),
            gen_degrees,
            relations,
            provenance,
        };
        m.check_homogeneous()?;
        Ok(m)
    }

    pub fn free(ring: &Arc<QuotientRing>, n: usize) -> GradedModule {
        GradedModule {
            ring: ring.clone(),
            gen_degrees: vec![Rational64::from_integer(0); n],
            relations: Vec::new(),
            provenance: Provenance::User,
        }
    }

    /// R itself as the trivially presented module.
    pub fn ring_module(ring: &Arc<QuotientRing>) -> GradedModule {
        GradedModule::free(ring, 1)
    }

    /// Cyclic quotient R / (gens).
    pub fn cyclic_quotient(ring: &Arc<QuotientRing>, gens: &[Polynomial]) -> Result<GradedModule> {
        let cols = gens.iter().map(|g| vec![g.clone()]).collect();
        GradedModule::new(
            ring,
            vec![Rational64::from_integer(0)],
            cols,
            Provenance::User,
        )
    }

    pub fn ring(&self) -> &Arc<QuotientRing> {
        &self.ring
    }

    pub fn num_gens(&self) -> usize {
        self.gen_degrees.len()
    }

    pub fn gen_degrees(&self) -> &[Rational64] {
        &self.gen_degrees
    }

    pub fn relations(&self) -> &[PolyVec] {
        &self.relations
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn relation_columns(&self) -> Vec<Vec<Polynomial>> {
        self.relations
            .iter()
            .map(|v| v.to_columns(self.ring.context()))
            .collect()
    }

    fn check_homogeneous(&self) -> Result<()> {
        let ctx = self.ring.context();
        for v in &self.relations {
            let mut col_degree: Option<Rational64> = None;
            for pos in 0..self.num_gens() as u32 {
                let entry = v.component(ctx, pos);
                if entry.is_zero() {
                    continue;
                }
                if !entry.is_homogeneous() {
                    return Err(Error::Invalid(
                        "relation entry is not homogeneous".into(),
                    ));
                }
                let d = entry.degree().unwrap() + self.gen_degrees[pos as usize];
                match col_degree {
                    None => col_degree = Some(d),
                    Some(c) if c == d => {}
                    Some(_) => {
                        return Err(Error::Invalid(
                            "relation column mixes degrees".into(),
                        ))
                    }
                }
            }
        }
        Ok(())
    }

    /// Presentation from pre-built relation vectors (entries already reduced).
    pub(crate) fn from_vec_relations(
        ring: &Arc<QuotientRing>,
        gen_degrees: Vec<Rational64>,
        relations: Vec<PolyVec>,
        provenance: Provenance,
    ) -> Result<GradedModule> {
        let m = GradedModule {
            ring: ring.clone(),
            gen_degrees,
            relations: relations.into_iter().filter(|v| !v.is_zero()).collect(),
            provenance,
        };
        m.check_homogeneous()?;
        Ok(m)
    }

    /// Append a generator with no relations touching it (used by the padded
    /// resolutions; the new generator is immediately cancelled by the
    /// identity summand added to the presentation).
    pub(crate) fn with_extra_generator(&self, degree: Rational64) -> GradedModule {
        let mut degrees = self.gen_degrees.clone();
        degrees.push(degree);
        let relations = self
            .relations
            .iter()
            .map(|v| PolyVec {
                rank: v.rank + 1,
                terms: v.terms.clone(),
            })
            .collect();
        GradedModule {
            ring: self.ring.clone(),
            gen_degrees: degrees,
            relations,
            provenance: self.provenance,
        }
    }

    pub fn direct_sum(&self, other: &GradedModule) -> GradedModule {
        let ra = self.num_gens() as u32;
        let rb = other.num_gens() as u32;
        let rank = ra + rb;
        let mut degrees = self.gen_degrees.clone();
        degrees.extend(other.gen_degrees.iter().cloned());
        let mut relations: Vec<PolyVec> = self
            .relations
            .iter()
            .map(|v| PolyVec {
                rank,
                terms: v.terms.clone(),
            })
            .collect();
        relations.extend(other.relations.iter().map(|v| PolyVec {
            rank,
            terms: v
                .terms
                .iter()
                .map(|t| VTerm {
                    pos: t.pos + ra,
                    exps: t.exps.clone(),
                    coeff: t.coeff,
                })
                .collect(),
        }));
        GradedModule {
            ring: self.ring.clone(),
            gen_degrees: degrees,
            relations,
            provenance: Provenance::User,
        }
    }

    /// Gaussian generator elimination: repeatedly cancel a scalar entry,
    /// dropping its row and column. Preserves the module up to isomorphism
    /// and graded-minimality bookkeeping; afterwards no relation entry is a
    /// unit, so the surviving generators are a minimal generating set.
    pub fn pruned(&self) -> Result<GradedModule> {
        let ctx = self.ring.context().clone();
        let mut degrees = self.gen_degrees.clone();
        let mut cols: Vec<PolyVec> = self.relations.clone();
        loop {
            let mut found: Option<(usize, u32, u64)> = None;
            'scan: for (j, col) in cols.iter().enumerate() {
                for pos in positions_of(col) {
                    let entry = col.component(&ctx, pos);
                    if entry.is_constant() && !entry.is_zero() {
                        found = Some((j, pos, entry.constant_term()));
                        break 'scan;
                    }
                }
            }
            let (j, pos, c) = match found {
                None => break,
                Some(f) => f,
            };
            let pivot_col = cols[j].clone();
            let cinv = crate::arith::inv(c, ctx.p());
            let mut next: Vec<PolyVec> = Vec::with_capacity(cols.len() - 1);
            for (j2, col) in cols.iter().enumerate() {
                if j2 == j {
                    continue;
                }
                let d = col.component(&ctx, pos);
                let updated = if d.is_zero() {
                    col.clone()
                } else {
                    let factor = d.scale(cinv).neg();
                    let adjusted = crate::gb::vec_add(
                        &ctx,
                        col,
                        &crate::gb::vec_mul_poly(&ctx, &pivot_col, &factor),
                    );
                    reduce_vec(&self.ring, &adjusted)?
                };
                let dropped = drop_position(&updated, pos);
                if !dropped.is_zero() {
                    next.push(dropped);
                }
            }
            degrees.remove(pos as usize);
            cols = next;
        }
        Ok(GradedModule {
            ring: self.ring.clone(),
            gen_degrees: degrees,
            relations: cols,
            provenance: self.provenance,
        })
    }

    /// Annihilator (0 : M) as an ideal of S containing I, computed by the
    /// module colon: the elements r with r e_k inside the relation span for
    /// every generator k.
    pub fn annihilator(&self) -> Result<IdealHandle> {
        let ctx = self.ring.context();
        let rank = self.num_gens() as u32;
        if rank == 0 {
            return Ok(IdealHandle::unit(ctx));
        }
        let mut acc: Option<IdealHandle> = None;
        for k in 0..rank {
            let mut gens: Vec<PolyVec> = vec![PolyVec::from_poly(&Polynomial::one(ctx), k, rank)];
            gens.extend(self.relations.iter().cloned());
            for f in self.ring.ideal().generators() {
                for pos in 0..rank {
                    gens.push(PolyVec::from_poly(f, pos, rank));
                }
            }
            let syz = crate::gb::syzygies_of(ctx, &gens)?;
            let cols: Vec<Polynomial> = syz
                .iter()
                .map(|v| v.component(ctx, 0))
                .filter(|f| !f.is_zero())
                .collect();
            let colon_k = IdealHandle::new(ctx, cols).plus(self.ring.ideal());
            acc = Some(match acc {
                None => colon_k,
                Some(prev) => prev.intersect(&colon_k)?,
            });
        }
        acc.unwrap().interreduced()
    }

    /// gamma(M) = dim R / ann(M).
    pub fn gamma(&self) -> Result<usize> {
        crate::ring::dimension_of_quotient(&self.annihilator()?)
    }

    /// lambda(M / J M) for an ideal J of R, via the module staircase.
    pub fn colength_mod(&self, j: &IdealHandle) -> Result<Colength> {
        let ctx = self.ring.context();
        let rank = self.num_gens() as u32;
        let mut gens = self.relations.clone();
        for pos in 0..rank {
            for f in j
                .generators()
                .iter()
                .chain(self.ring.ideal().generators().iter())
            {
                gens.push(PolyVec::from_poly(f, pos, rank));
            }
        }
        SubmoduleHandle::new(ctx, rank, gens).colength()
    }
}

pub(crate) fn positions_of(v: &PolyVec) -> Vec<u32> {
    let mut ps: Vec<u32> = v.terms.iter().map(|t| t.pos).collect();
    ps.sort_unstable();
    ps.dedup();
    ps
}

pub(crate) fn drop_position(v: &PolyVec, pos: u32) -> PolyVec {
    PolyVec {
        rank: v.rank - 1,
        terms: v
            .terms
            .iter()
            .filter(|t| t.pos != pos)
            .map(|t| VTerm {
                pos: if t.pos > pos { t.pos - 1 } else { t.pos },
                exps: t.exps.clone(),
                coeff: t.coeff,
            })
            .collect(),
    }
}

/// Reduce every component of a vector modulo the defining ideal.
pub(crate) fn reduce_vec(ring: &QuotientRing, v: &PolyVec) -> Result<PolyVec> {
    let ctx = ring.context();
    let mut cols = Vec::with_capacity(v.rank as usize);
    for pos in 0..v.rank {
        cols.push(ring.reduce(&v.component(ctx, pos))?);
    }
    Ok(PolyVec::from_columns(ctx, &cols))
}

/// Digit monomials 0 <= b < q componentwise, in lexicographic order with the
/// first variable most significant. This indexing fixes all downstream
/// matrix layouts.
pub fn digit_monomials(nvars: usize, q: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    loop {
        out.push(cur.clone());
        let mut i = nvars;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < q {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn digit_index(b: &[u32], q: u32) -> usize {
    b.iter().fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

/// F^e_* R presented over R: one generator per digit monomial x^b with
/// degree deg(x^b)/q, one relation column per (defining generator, digit)
/// pair from the digit decomposition of x^a f. Returns the pruned
/// presentation.
pub fn pushforward_ring(ring: &Arc<QuotientRing>, e: u32) -> Result<GradedModule> {
    pushforward_module(&GradedModule::ring_module(ring), e)
}

/// F^e_* M for a presented module M: generators are (module generator,
/// digit) pairs; relations are the digit decompositions of x^a times each
/// relation entry together with the defining ideal acting on every
/// generator slot. Exactness of the pushforward makes this a presentation
/// of F^e_* M.
pub fn pushforward_module(m: &GradedModule, e: u32) -> Result<GradedModule> {
    pushforward_module_with_cap(m, e, SIZE_GUARD)
}

pub fn pushforward_module_with_cap(
    m: &GradedModule,
    e: u32,
    cap: usize,
) -> Result<GradedModule> {
    assert!(e >= 1);
    let ring = m.ring().clone();
    let ctx = ring.context().clone();
    let n = ctx.nvars();
    let q64 = q_power(ctx.p(), e)?;
    let q = q64 as u32;
    let qn = (q64 as u128).checked_pow(n as u32).ok_or(Error::SizeGuard {
        what: "pushforward",
        requested: usize::MAX,
        cap,
    })?;
    let total = qn as usize * m.num_gens();
    if qn > cap as u128 || total > cap {
        return Err(Error::SizeGuard {
            what: "pushforward",
            requested: total,
            cap,
        });
    }
    let digits = digit_monomials(n, q);
    let rank = total as u32;
    let qr = Rational64::from_integer(q64 as i64);
    let mut degrees = Vec::with_capacity(total);
    for k in 0..m.num_gens() {
        for b in &digits {
            degrees.push((m.gen_degrees()[k] + ctx.weighted_degree(b)) / qr);
        }
    }
    let row = |k: usize, b: &[u32]| (k * digits.len() + digit_index(b, q)) as u32;

    let mut columns: Vec<PolyVec> = Vec::new();
    let push_decomposition =
        |cols: &mut Vec<PolyVec>, k: usize, f: &Polynomial, a: &[u32]| -> Result<()> {
            let shifted = f.mul_term(a, 1);
            let mut terms: Vec<(u32, Polynomial)> = Vec::new();
            for (b, c) in frobenius_decompose(&shifted, e)? {
                let c = ring.reduce(&c)?;
                if !c.is_zero() {
                    terms.push((row(k, &b), c));
                }
            }
            if terms.is_empty() {
                return Ok(());
            }
            let mut v = PolyVec::zero(rank);
            for (pos, c) in terms {
                v = crate::gb::vec_add(&ctx, &v, &{
                    let mut w = PolyVec::from_poly(&c, pos, rank);
                    w.rank = rank;
                    w
                });
            }
            cols.push(v);
            Ok(())
        };

    // defining ideal acting on every generator slot
    for f in ring.ideal().generators() {
        for k in 0..m.num_gens() {
            for a in &digits {
                push_decomposition(&mut columns, k, f, a)?;
            }
        }
    }
    // pushed module relations
    for rel in m.relations() {
        for a in &digits {
            let mut v = PolyVec::zero(rank);
            for k in 0..m.num_gens() as u32 {
                let entry = rel.component(&ctx, k);
                if entry.is_zero() {
                    continue;
                }
                let shifted = entry.mul_term(a, 1);
                for (b, c) in frobenius_decompose(&shifted, e)? {
                    let c = ring.reduce(&c)?;
                    if !c.is_zero() {
                        let w = PolyVec::from_poly(&c, row(k as usize, &b), rank);
                        v = crate::gb::vec_add(&ctx, &v, &w);
                    }
                }
            }
            if !v.is_zero() {
                columns.push(v);
            }
        }
    }

    let module = GradedModule {
        ring,
        gen_degrees: degrees,
        relations: columns,
        provenance: Provenance::Pushforward(e),
    };
    module.check_homogeneous()?;
    module.pruned()
}

/// Rank of F^e_* R at the zero prime of a domain, from the pruned
/// presentation: generator count minus the generic rank of the relation
/// matrix. Cross-checked against q^gamma(R); a mismatch means a bug or a
/// non-domain input and is an error.
pub fn generic_rank_pushforward(ring: &Arc<QuotientRing>, e: u32) -> Result<u64> {
    let m = pushforward_ring(ring, e)?;
    let ctx = ring.context();
    let rows: Vec<Vec<Polynomial>> = m
        .relations()
        .iter()
        .map(|v| v.to_columns(ctx))
        .collect();
    let rank = crate::gb::generic_rank(&rows, ring.ideal())?;
    let got = (m.num_gens() - rank) as u64;
    let q = q_power(ctx.p(), e)?;
    let expect = q.pow(ring.gamma()? as u32);
    if got != expect {
        return Err(Error::InternalConsistency(format!(
            "rank of pushforward at the zero ideal is {got}, expected q^gamma = {expect}"
        )));
    }
    Ok(got)
}
