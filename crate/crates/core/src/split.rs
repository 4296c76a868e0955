//! Fedder-type splitting machinery: splitting ideals I_e, splitting numbers
//! a_e at maximal and non-maximal primes, splitting primes with
//! stabilization evidence, strong F-regularity certificates via test
//! elements, and free-rank computation through the Hom-evaluation matrix.

use crate::error::{Error, Result};
use crate::frob::{pushforward_module, GradedModule};
use crate::gb::{generic_rank, IdealHandle, PolyVec};
use crate::poly::{bracket_power_ideal, q_power, Polynomial};
use crate::ring::{length_at_prime, PrimeSpec, QuotientRing};
use std::sync::Arc;

/// The e-th splitting ideal of R at a locus, carried as its preimage in S:
/// ((P^[q] + I^[q]) : (I^[q] : I)). Contains P^[q] + I; at the irrelevant
/// maximal ideal its colength is the splitting number a_e.
#[derive(Debug, Clone)]
pub struct SplittingIdeal {
    pub e: u32,
    pub preimage: IdealHandle,
}

/// Fedder's criterion at a maximal locus: R = S/I is F-pure there iff
/// (I^[p] : I) is not contained in m^[p].
pub fn fedder_is_fpure(ring: &Arc<QuotientRing>, at: &PrimeSpec) -> Result<bool> {
    if !at.is_maximal() {
        return Err(Error::Invalid("Fedder test needs a maximal locus".into()));
    }
    let ctx = ring.context();
    let i_gens = ring.ideal().generators().to_vec();
    let iq = IdealHandle::new(ctx, bracket_power_ideal(&i_gens, 1)?);
    let colon = iq.colon(ring.ideal())?;
    let mq = IdealHandle::new(
        ctx,
        bracket_power_ideal(at.ideal().generators(), 1)?,
    );
    Ok(!mq.contains_ideal(&colon)?)
}

/// The splitting-ideal preimage ((P^[q] + I^[q]) : (I^[q] : I)) in S.
pub fn splitting_ideal(
    ring: &Arc<QuotientRing>,
    at: &PrimeSpec,
    e: u32,
) -> Result<SplittingIdeal> {
    assert!(e >= 1);
    let ctx = ring.context();
    let i_gens = ring.ideal().generators().to_vec();
    let iq = IdealHandle::new(ctx, bracket_power_ideal(&i_gens, e)?);
    let colon_ideal = iq.colon(ring.ideal())?;
    let pq = IdealHandle::new(ctx, bracket_power_ideal(at.ideal().generators(), e)?);
    let numerator = pq.plus(&iq);
    let preimage = numerator.colon(&colon_ideal)?;
    Ok(SplittingIdeal { e, preimage })
}

/// a_e at the locus: colength of the preimage at the irrelevant maximal
/// ideal; at a non-maximal prime, the localized length scaled by
/// p^(e alpha(P)).
pub fn splitting_number(ring: &Arc<QuotientRing>, at: &PrimeSpec, e: u32) -> Result<u64> {
    let ideal = splitting_ideal(ring, at, e)?;
    if at.is_maximal() {
        match ideal.preimage.colength()? {
            crate::gb::Colength::Finite(n) => Ok(n),
            crate::gb::Colength::Infinite => Err(Error::InternalConsistency(
                "splitting ideal at the maximal locus is not cofinite".into(),
            )),
        }
    } else {
        let len = length_at_prime(ring, &ideal.preimage, at)?;
        let scale = q_power(ring.context().p(), e)?.pow(at.alpha() as u32);
        Ok(len * scale)
    }
}

/// Outcome of the finite-e splitting-prime computation. Stabilization of
/// the partial intersections is evidence, not proof, and is flagged as
/// such; the certified-zero outcome uses a test element with R_c regular,
/// which does prove strong F-regularity and hence a zero splitting prime.
#[derive(Debug, Clone)]
pub enum SplittingPrime {
    NotFPure,
    CertifiedZero { via_e: u32 },
    Stabilized { preimage: IdealHandle, at_e: u32 },
    NotStabilized { last: IdealHandle },
}

/// Intersect the splitting ideals for e = 1..e_max. `test_element` is an
/// optional element c with R_c regular (caller-asserted); when some
/// splitting ideal misses c the splitting prime is exactly zero.
pub fn splitting_prime(
    ring: &Arc<QuotientRing>,
    at: &PrimeSpec,
    e_max: u32,
    test_element: Option<&Polynomial>,
) -> Result<SplittingPrime> {
    assert!(e_max >= 2);
    let first = splitting_ideal(ring, at, 1)?.preimage;
    if first.is_unit_ideal()? {
        return Ok(SplittingPrime::NotFPure);
    }
    let mut current = first.interreduced()?;
    let mut stabilized_at: Option<u32> = None;
    for e in 2..=e_max {
        let next = splitting_ideal(ring, at, e)?.preimage;
        if let Some(c) = test_element {
            if !next.contains(c)? || !current.contains(c)? {
                return Ok(SplittingPrime::CertifiedZero { via_e: e });
            }
        }
        let meet = current.intersect(&next)?.interreduced()?;
        if meet.equals(&current)? {
            if stabilized_at.is_none() {
                stabilized_at = Some(e);
            }
        } else {
            stabilized_at = None;
        }
        current = meet;
    }
    if let Some(c) = test_element {
        if !current.contains(c)? {
            return Ok(SplittingPrime::CertifiedZero { via_e: 1 });
        }
    }
    match stabilized_at {
        Some(at_e) => Ok(SplittingPrime::Stabilized {
            preimage: current,
            at_e,
        }),
        None => Ok(SplittingPrime::NotStabilized { last: current }),
    }
}

#[derive(Debug, Clone)]
pub enum SfrOutcome {
    Certified { e: u32 },
    EvidenceNot { preimage: IdealHandle },
    Inconclusive,
}

/// Strong F-regularity certificate: c must be a test element in the sense
/// that R_c is regular (caller-asserted, corpus-annotated). Membership of c
/// outside some splitting ideal certifies strong F-regularity; a stabilized
/// nonzero splitting prime containing c is evidence against it.
pub fn sfr_certificate(
    ring: &Arc<QuotientRing>,
    at: &PrimeSpec,
    c: &Polynomial,
    e_max: u32,
) -> Result<SfrOutcome> {
    for e in 1..=e_max {
        let ideal = splitting_ideal(ring, at, e)?;
        if !ideal.preimage.contains(c)? {
            return Ok(SfrOutcome::Certified { e });
        }
    }
    if e_max >= 2 {
        if let SplittingPrime::Stabilized { preimage, .. } =
            splitting_prime(ring, at, e_max, None)?
        {
            let is_zero_in_r = preimage.equals(ring.ideal())?;
            if !is_zero_in_r && preimage.contains(c)? {
                return Ok(SfrOutcome::EvidenceNot { preimage });
            }
        }
    }
    Ok(SfrOutcome::Inconclusive)
}

/// Generators of Hom_R(M, R) as row vectors: the syzygies of the rows of
/// the relation matrix. Returns the evaluation matrix T with one row per
/// Hom generator and one column per module generator.
pub fn hom_evaluation_matrix(m: &GradedModule) -> Result<Vec<Vec<Polynomial>>> {
    let ring = m.ring();
    let ctx = ring.context();
    let g = m.num_gens();
    let t = m.relations().len();
    if g == 0 {
        return Ok(Vec::new());
    }
    if t == 0 {
        // free module: Hom generated by the coordinate projections
        let mut id = Vec::with_capacity(g);
        for l in 0..g {
            let mut row = vec![Polynomial::zero(ctx); g];
            row[l] = Polynomial::one(ctx);
            id.push(row);
        }
        return Ok(id);
    }
    // row k of the relation matrix, as a vector in R^t
    let rows: Vec<PolyVec> = (0..g as u32)
        .map(|k| {
            let entries: Vec<Polynomial> = m
                .relations()
                .iter()
                .map(|col| col.component(ctx, k))
                .collect();
            PolyVec::from_columns(ctx, &entries)
        })
        .collect();
    let homs = crate::resolve::syzygies_over_r(ring, t as u32, &rows)?;
    Ok(homs
        .iter()
        .map(|phi| (0..g as u32).map(|k| phi.component(ctx, k)).collect())
        .collect())
}

/// Maximal rank of a free direct summand: the kappa(P)-rank of the
/// evaluation matrix at the irrelevant maximal ideal, which computes
/// lambda(M / I(M)) for the non-split submodule I(M).
pub fn free_rank(m: &GradedModule) -> Result<u64> {
    let pruned = m.pruned()?;
    let mmax = m.ring().irrelevant_maximal();
    free_rank_at_ideal(&pruned, &mmax)
}

/// frk of the localization M_P: the generic rank of the evaluation matrix
/// over kappa(P).
pub fn free_rank_at(m: &GradedModule, at: &PrimeSpec) -> Result<u64> {
    let pruned = m.pruned()?;
    free_rank_at_ideal(&pruned, at.ideal())
}

fn free_rank_at_ideal(pruned: &GradedModule, prime: &IdealHandle) -> Result<u64> {
    if pruned.num_gens() == 0 {
        return Ok(0);
    }
    let t = hom_evaluation_matrix(pruned)?;
    if t.is_empty() {
        return Ok(0);
    }
    Ok(generic_rank(&t, prime)? as u64)
}

/// a_e(M) = frk(F^e_* M) for the graded module M.
pub fn module_splitting_number(m: &GradedModule, e: u32) -> Result<u64> {
    free_rank(&pushforward_module(m, e)?)
}

/// a_e(M_P) = frk over R_P of F^e_*(M_P).
pub fn module_splitting_number_at(m: &GradedModule, e: u32, at: &PrimeSpec) -> Result<u64> {
    free_rank_at(&pushforward_module(m, e)?, at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, MonomialOrder, PolyContext};

    fn ring(p: u64, vars: &[&str], gens: &[&str]) -> Arc<QuotientRing> {
        let ctx = PolyContext::new(p, vars, MonomialOrder::Grevlex).unwrap();
        let gens = gens
            .iter()
            .map(|s| parse_polynomial(&ctx, s).unwrap())
            .collect();
        QuotientRing::new(&ctx, gens).unwrap()
    }

    fn xy2() -> Arc<QuotientRing> {
        ring(2, &["x", "y"], &["x*y"])
    }

    #[test]
    fn fedder_classification() {
        let quadric = ring(3, &["x", "y", "z"], &["x^2 - y*z"]);
        assert!(fedder_is_fpure(&quadric, &PrimeSpec::irrelevant(&quadric).unwrap()).unwrap());

        let fermat2 = ring(2, &["x", "y", "z"], &["x^3 + y^3 + z^3"]);
        assert!(!fedder_is_fpure(&fermat2, &PrimeSpec::irrelevant(&fermat2).unwrap()).unwrap());

        let fermat7 = ring(7, &["x", "y", "z"], &["x^3 + y^3 + z^3"]);
        assert!(fedder_is_fpure(&fermat7, &PrimeSpec::irrelevant(&fermat7).unwrap()).unwrap());

        let xy = xy2();
        assert!(fedder_is_fpure(&xy, &PrimeSpec::irrelevant(&xy).unwrap()).unwrap());
    }

    #[test]
    fn splitting_ideal_examples() {
        let xy = xy2();
        let ctx = xy.context();
        let m = PrimeSpec::irrelevant(&xy).unwrap();
        let expect = IdealHandle::new(
            ctx,
            vec![
                parse_polynomial(ctx, "x").unwrap(),
                parse_polynomial(ctx, "y").unwrap(),
            ],
        );
        for e in 1..=3 {
            let si = splitting_ideal(&xy, &m, e).unwrap();
            assert!(si.preimage.equals(&expect).unwrap(), "e = {e}");
            // always contains m^[q] + I
            let mq = IdealHandle::new(
                ctx,
                bracket_power_ideal(m.ideal().generators(), e).unwrap(),
            );
            assert!(si.preimage.contains_ideal(&mq).unwrap());
            assert!(si.preimage.contains_ideal(xy.ideal()).unwrap());
        }

        // polynomial ring: I = 0 so the colon is by the unit ideal
        let line = ring(2, &["x"], &[]);
        let m1 = PrimeSpec::irrelevant(&line).unwrap();
        let si = splitting_ideal(&line, &m1, 1).unwrap();
        let x2 = IdealHandle::new(
            line.context(),
            vec![parse_polynomial(line.context(), "x^2").unwrap()],
        );
        assert!(si.preimage.equals(&x2).unwrap());
    }

    #[test]
    fn splitting_numbers() {
        let xy = xy2();
        let m = PrimeSpec::irrelevant(&xy).unwrap();
        for e in 1..=3 {
            assert_eq!(splitting_number(&xy, &m, e).unwrap(), 1);
        }

        let line = ring(2, &["x"], &[]);
        let m1 = PrimeSpec::irrelevant(&line).unwrap();
        assert_eq!(splitting_number(&line, &m1, 1).unwrap(), 2);

        // at the non-maximal prime (x) of the xy-ring the localization is a
        // field with residue degree p^e
        let ctx = xy.context();
        let px = PrimeSpec::new(&xy, vec![parse_polynomial(ctx, "x").unwrap()], "px").unwrap();
        for e in 1..=2u32 {
            assert_eq!(splitting_number(&xy, &px, e).unwrap(), 1 << e);
        }
    }

    #[test]
    fn splitting_prime_outcomes() {
        let xy = xy2();
        let m = PrimeSpec::irrelevant(&xy).unwrap();
        match splitting_prime(&xy, &m, 3, None).unwrap() {
            SplittingPrime::Stabilized { preimage, at_e } => {
                assert_eq!(at_e, 2);
                let expect = IdealHandle::new(
                    xy.context(),
                    vec![
                        parse_polynomial(xy.context(), "x").unwrap(),
                        parse_polynomial(xy.context(), "y").unwrap(),
                    ],
                );
                assert!(preimage.equals(&expect).unwrap());
            }
            other => panic!("expected stabilization, got {other:?}"),
        }

        let fermat2 = ring(2, &["x", "y", "z"], &["x^3 + y^3 + z^3"]);
        let m3 = PrimeSpec::irrelevant(&fermat2).unwrap();
        assert!(matches!(
            splitting_prime(&fermat2, &m3, 2, None).unwrap(),
            SplittingPrime::NotFPure
        ));

        // regular line: certified zero through the test element 1
        let line = ring(3, &["x"], &[]);
        let m1 = PrimeSpec::irrelevant(&line).unwrap();
        let one = Polynomial::one(line.context());
        assert!(matches!(
            splitting_prime(&line, &m1, 2, Some(&one)).unwrap(),
            SplittingPrime::CertifiedZero { .. }
        ));
        // without the certificate the intersections keep shrinking
        match splitting_prime(&line, &m1, 3, None).unwrap() {
            SplittingPrime::NotStabilized { last } => {
                let x27 = IdealHandle::new(
                    line.context(),
                    vec![parse_polynomial(line.context(), "x^27").unwrap()],
                );
                assert!(last.equals(&x27).unwrap());
            }
            other => panic!("expected no stabilization, got {other:?}"),
        }
    }

    #[test]
    fn sfr_certificates() {
        let quadric = ring(3, &["x", "y", "z"], &["x^2 - y*z"]);
        let m = PrimeSpec::irrelevant(&quadric).unwrap();
        let y = parse_polynomial(quadric.context(), "y").unwrap();
        match sfr_certificate(&quadric, &m, &y, 2).unwrap() {
            SfrOutcome::Certified { e } => assert_eq!(e, 1),
            other => panic!("expected certificate, got {other:?}"),
        }

        let xy = xy2();
        let mxy = PrimeSpec::irrelevant(&xy).unwrap();
        let c = parse_polynomial(xy.context(), "x + y").unwrap();
        match sfr_certificate(&xy, &mxy, &c, 3).unwrap() {
            SfrOutcome::EvidenceNot { preimage } => {
                let expect = IdealHandle::new(
                    xy.context(),
                    vec![
                        parse_polynomial(xy.context(), "x").unwrap(),
                        parse_polynomial(xy.context(), "y").unwrap(),
                    ],
                );
                assert!(preimage.equals(&expect).unwrap());
            }
            other => panic!("expected evidence against, got {other:?}"),
        }

        let line = ring(5, &["x"], &[]);
        let mline = PrimeSpec::irrelevant(&line).unwrap();
        let one = Polynomial::one(line.context());
        match sfr_certificate(&line, &mline, &one, 1).unwrap() {
            SfrOutcome::Certified { e } => assert_eq!(e, 1),
            other => panic!("expected certificate, got {other:?}"),
        }
    }

    #[test]
    fn free_rank_examples() {
        // R + R/(x) over F_p[x]
        let line = ring(5, &["x"], &[]);
        let x = parse_polynomial(line.context(), "x").unwrap();
        let free = GradedModule::ring_module(&line);
        let torsion = GradedModule::cyclic_quotient(&line, &[x.clone()]).unwrap();
        assert_eq!(free_rank(&free.direct_sum(&torsion)).unwrap(), 1);

        let rr = free.direct_sum(&free);
        assert_eq!(free_rank(&rr).unwrap(), 2);

        // the maximal ideal (x, y) of F_p[x,y] as a module: Koszul
        // presentation, no free summand
        let plane = ring(5, &["x", "y"], &[]);
        let ctx = plane.context();
        let ideal_module = GradedModule::new(
            &plane,
            vec![
                num_rational::Rational64::from_integer(1),
                num_rational::Rational64::from_integer(1),
            ],
            vec![vec![
                parse_polynomial(ctx, "y").unwrap(),
                parse_polynomial(ctx, "x").unwrap().neg(),
            ]],
            crate::frob::Provenance::User,
        )
        .unwrap();
        assert_eq!(free_rank(&ideal_module).unwrap(), 0);
    }

    #[test]
    fn module_splitting_numbers() {
        let xy = xy2();
        let ctx = xy.context();
        let r_mod = GradedModule::ring_module(&xy);
        for e in 1..=3 {
            assert_eq!(module_splitting_number(&r_mod, e).unwrap(), 1, "a_e(R)");
        }

        let x = parse_polynomial(ctx, "x").unwrap();
        let rx = GradedModule::cyclic_quotient(&xy, &[x]).unwrap();
        for e in 1..=3 {
            assert_eq!(module_splitting_number(&rx, e).unwrap(), 0, "a_e(R/x)");
        }

        let sum = r_mod.direct_sum(&rx);
        for e in 1..=3 {
            assert_eq!(module_splitting_number(&sum, e).unwrap(), 1);
        }
    }

    #[test]
    fn fedder_and_free_rank_agree() {
        // two independent computation paths for a_e at m
        for r in [
            xy2(),
            ring(3, &["x", "y"], &["x*y"]),
            ring(3, &["x", "y", "z"], &["x^2 - y*z"]),
        ] {
            let m = PrimeSpec::irrelevant(&r).unwrap();
            for e in 1..=2 {
                let via_colon = splitting_number(&r, &m, e).unwrap();
                let via_frk =
                    module_splitting_number(&GradedModule::ring_module(&r), e).unwrap();
                assert_eq!(via_colon, via_frk, "p={}, e={e}", r.context().p());
            }
        }
    }

    #[test]
    fn module_splitting_number_at_primes() {
        let xy = xy2();
        let ctx = xy.context();
        let r_mod = GradedModule::ring_module(&xy);
        let px = PrimeSpec::new(&xy, vec![parse_polynomial(ctx, "x").unwrap()], "px").unwrap();
        for e in 1..=2u32 {
            // localization at (x) is the field F_p(y)
            assert_eq!(
                module_splitting_number_at(&r_mod, e, &px).unwrap(),
                1 << e
            );
        }
        // R/(x) localized at (x) is that same field, so it splits fully too
        let rx = GradedModule::cyclic_quotient(&xy, &[parse_polynomial(ctx, "x").unwrap()])
            .unwrap();
        assert_eq!(module_splitting_number_at(&rx, 1, &px).unwrap(), 2);
        // but at m it never acquires a free summand
        let m = PrimeSpec::irrelevant(&xy).unwrap();
        assert_eq!(module_splitting_number_at(&rx, 1, &m).unwrap(), 0);
    }
}
