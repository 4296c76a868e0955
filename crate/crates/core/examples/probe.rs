use charp_core::frob::GradedModule;
use charp_core::invariants::hk_function;
use charp_core::poly::{parse_polynomial, MonomialOrder, PolyContext};
use charp_core::ring::{PrimeSpec, QuotientRing};
use charp_core::split::*;
use std::sync::Arc;
use std::time::Instant;

fn ring(p: u64, vars: &[&str], gens: &[&str]) -> Arc<QuotientRing> {
    let ctx = PolyContext::new(p, vars, MonomialOrder::Grevlex).unwrap();
    let gens = gens.iter().map(|s| parse_polynomial(&ctx, s).unwrap()).collect();
    QuotientRing::new(&ctx, gens).unwrap()
}

fn main() {
    let fermat7 = ring(7, &["x", "y", "z"], &["x^3 + y^3 + z^3"]);
    let m7 = PrimeSpec::irrelevant(&fermat7).unwrap();
    let t0 = Instant::now();
    println!("fermat7 fpure: {} ({:?})", fedder_is_fpure(&fermat7, &m7).unwrap(), t0.elapsed());
    let t0 = Instant::now();
    println!("fermat7 a_1 = {} ({:?})", splitting_number(&fermat7, &m7, 1).unwrap(), t0.elapsed());
    let t0 = Instant::now();
    println!("fermat7 a_2 = {} ({:?})", splitting_number(&fermat7, &m7, 2).unwrap(), t0.elapsed());
    let t0 = Instant::now();
    println!("fermat7 frk e=1 = {} ({:?})", module_splitting_number(&GradedModule::ring_module(&fermat7), 1).unwrap(), t0.elapsed());
    let t0 = Instant::now();
    let hk = hk_function(&fermat7, &[1]).unwrap();
    println!("fermat7 hk raw: {:?} ({:?})", hk.rows[0].raw, t0.elapsed());
    let t0 = Instant::now();
    match splitting_prime(&fermat7, &m7, 3, None).unwrap() {
        SplittingPrime::Stabilized { preimage, at_e } => {
            println!("fermat7 splitting prime stabilized at E={at_e}: {} gens ({:?})", preimage.generators().len(), t0.elapsed());
            for g in preimage.generators() { println!("   gen: {g}"); }
        }
        other => println!("fermat7 splitting prime: {other:?}"),
    }

    let whitney = ring(2, &["x", "y", "z"], &["x^2*y - z^2"]);
    let mw = PrimeSpec::irrelevant(&whitney).unwrap();
    println!("whitney fpure: {}", fedder_is_fpure(&whitney, &mw).unwrap());
    let t0 = Instant::now();
    println!("whitney a_1 = {}, a_2 = {} ({:?})",
        splitting_number(&whitney, &mw, 1).unwrap(),
        splitting_number(&whitney, &mw, 2).unwrap(), t0.elapsed());
    let t0 = Instant::now();
    let hk = hk_function(&whitney, &[1, 2]).unwrap();
    println!("whitney hk raw: {:?} normalized {:?} est {:?} ({:?})",
        hk.rows.iter().map(|r| r.raw).collect::<Vec<_>>(),
        hk.rows.iter().map(|r| r.normalized.clone()).collect::<Vec<_>>(),
        hk.estimate.as_ref().map(|f| f.limit), t0.elapsed());

    let fermat2 = ring(2, &["x", "y", "z"], &["x^3 + y^3 + z^3"]);
    let m2 = PrimeSpec::irrelevant(&fermat2).unwrap();
    println!("fermat2 a_1 = {}, a_2 = {}",
        splitting_number(&fermat2, &m2, 1).unwrap(),
        splitting_number(&fermat2, &m2, 2).unwrap());
}
