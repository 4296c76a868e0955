//! Orchestration of e-sweeps and prime-sweeps: Hilbert-Kunz function,
//! Frobenius Betti and Euler characteristic sequences with normalization,
//! splitting-ratio reports, local-global comparisons, W-stratification and
//! the analytic field model. All normalized values are exact rationals;
//! extrapolation is the only floating-point step.

use crate::error::{Error, Result};
use crate::frob::{pushforward_module, GradedModule};
use crate::gb::bracket_for_ideal;
use crate::poly::q_power;
use crate::resolve::{betti_at_prime, free_resolution, global_chi};
use crate::ring::{PrimeSpec, QuotientRing};
use crate::split::{module_splitting_number, module_splitting_number_at, splitting_number};
use num_rational::Rational64;
use serde::Serialize;
use std::sync::Arc;

pub fn rat_str(r: Rational64) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn rat_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Least-squares fit of x_e = L + C p^(-e).
#[derive(Debug, Clone, Serialize)]
pub struct Fit {
    pub limit: f64,
    pub coefficient: f64,
    pub max_residual: f64,
}

pub fn convergence_diagnostics(points: &[(u32, f64)], p: u64) -> Result<Fit> {
    if points.len() < 2 {
        return Err(Error::Invalid("need at least two points to fit".into()));
    }
    let n = points.len() as f64;
    let (mut sw, mut sww, mut sx, mut swx) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let ws: Vec<f64> = points
        .iter()
        .map(|&(e, _)| (p as f64).powi(-(e as i32)))
        .collect();
    for (&(_, x), &w) in points.iter().zip(ws.iter()) {
        sw += w;
        sww += w * w;
        sx += x;
        swx += w * x;
    }
    let det = n * sww - sw * sw;
    if det.abs() < 1e-14 {
        return Err(Error::Invalid("degenerate fit".into()));
    }
    let limit = (sx * sww - sw * swx) / det;
    let coefficient = (n * swx - sw * sx) / det;
    let max_residual = points
        .iter()
        .zip(ws.iter())
        .map(|(&(_, x), &w)| (x - limit - coefficient * w).abs())
        .fold(0.0, f64::max);
    Ok(Fit {
        limit,
        coefficient,
        max_residual,
    })
}

/// One structural inequality, instantiated with the numbers that were
/// actually compared.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub statement: String,
    pub passed: bool,
}

impl CheckResult {
    pub fn new(name: &str, statement: String, passed: bool) -> CheckResult {
        CheckResult {
            name: name.to_string(),
            statement,
            passed,
        }
    }

    pub fn into_result(self) -> Result<CheckResult> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::TheoremViolation(format!(
                "{}: {}",
                self.name, self.statement
            )))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HkRow {
    pub e: u32,
    pub q: u64,
    pub raw: u64,
    pub normalized: String,
    pub normalized_f64: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct HkReport {
    pub kind: &'static str,
    pub gamma: usize,
    pub rows: Vec<HkRow>,
    pub estimate: Option<Fit>,
}

/// Hilbert-Kunz function: raw lambda(R / m^[q]) per e, normalized by
/// p^(e dim R), with the extrapolated multiplicity estimate.
pub fn hk_function(ring: &Arc<QuotientRing>, e_range: &[u32]) -> Result<HkReport> {
    let gamma = ring.dimension()?;
    let p = ring.context().p();
    let mut rows = Vec::new();
    for &e in e_range {
        let raw = hk_value(ring, e)?;
        let q = q_power(p, e)?;
        let denom = q.pow(gamma as u32) as i64;
        let normalized = Rational64::new(raw as i64, denom);
        rows.push(HkRow {
            e,
            q,
            raw,
            normalized: rat_str(normalized),
            normalized_f64: rat_f64(normalized),
        });
    }
    let points: Vec<(u32, f64)> = rows.iter().map(|r| (r.e, r.normalized_f64)).collect();
    let estimate = if points.len() >= 2 {
        Some(convergence_diagnostics(&points, p)?)
    } else {
        None
    };
    Ok(HkReport {
        kind: "HK",
        gamma,
        rows,
        estimate,
    })
}

/// lambda(R / m^[q]) = colength of m^[q] + I.
pub fn hk_value(ring: &Arc<QuotientRing>, e: u32) -> Result<u64> {
    let mq = bracket_for_ideal(&ring.irrelevant_maximal(), e)?;
    match ring.colength_in_r(&mq)? {
        crate::gb::Colength::Finite(n) => Ok(n),
        crate::gb::Colength::Infinite => Err(Error::InternalConsistency(
            "Hilbert-Kunz colength must be finite for a graded ring".into(),
        )),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BettiRow {
    pub e: u32,
    pub betti: Vec<i64>,
    pub chi: Vec<i64>,
    pub normalized_betti: Vec<String>,
    pub normalized_chi: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BettiSequenceReport {
    pub kind: &'static str,
    pub gamma_used: usize,
    pub gamma_module: usize,
    pub overnormalized: bool,
    pub rows: Vec<BettiRow>,
    pub estimates: Vec<Fit>,
    pub checks: Vec<CheckResult>,
}

/// Global Frobenius Betti and Euler characteristic sequence of M through
/// homological degree i, normalized by p^(e gamma).
pub fn frobenius_betti_sequence(
    m: &GradedModule,
    i: usize,
    e_range: &[u32],
    gamma_override: Option<usize>,
) -> Result<BettiSequenceReport> {
    let ring = m.ring();
    let p = ring.context().p();
    let gamma_module = m.gamma()?;
    let gamma_used = gamma_override.unwrap_or(gamma_module);
    if gamma_used < gamma_module {
        return Err(Error::Invalid(format!(
            "normalization exponent {gamma_used} below gamma(M) = {gamma_module}"
        )));
    }
    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for &e in e_range {
        let fe = pushforward_module(m, e)?;
        let report =
            crate::resolve::betti_numbers(&fe, i, crate::resolve::BettiLocus::Global, e, gamma_used)?;
        let q = q_power(p, e)?;
        let denom = q.pow(gamma_used as u32) as i64;
        let chi: Vec<i64> = (0..=i).map(|j| report.chi(j)).collect();
        // bookkeeping identity beta_i = chi_i + chi_{i-1}
        for j in 1..=i {
            let lhs = report.betti[j];
            let rhs = chi[j] + chi[j - 1];
            checks.push(
                CheckResult::new(
                    "betti_chi_identity",
                    format!("e={e}: beta_{j} = {lhs} equals chi_{j} + chi_{}{} = {rhs}", j - 1, ""),
                    lhs == rhs,
                )
                .into_result()?,
            );
        }
        rows.push(BettiRow {
            e,
            normalized_betti: report
                .betti
                .iter()
                .map(|&b| rat_str(Rational64::new(b, denom)))
                .collect(),
            normalized_chi: chi
                .iter()
                .map(|&c| rat_str(Rational64::new(c, denom)))
                .collect(),
            betti: report.betti,
            chi,
        });
    }
    let mut estimates = Vec::new();
    if rows.len() >= 2 {
        for j in 0..=i {
            let points: Vec<(u32, f64)> = rows
                .iter()
                .map(|r| {
                    let denom = (q_power(p, r.e).unwrap()).pow(gamma_used as u32) as f64;
                    (r.e, r.betti[j] as f64 / denom)
                })
                .collect();
            estimates.push(convergence_diagnostics(&points, p)?);
        }
    }
    Ok(BettiSequenceReport {
        kind: "BETTI",
        gamma_used,
        gamma_module,
        overnormalized: gamma_used > gamma_module,
        rows,
        estimates,
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeChi {
    pub prime: String,
    pub betti: Vec<i64>,
    pub chi: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChiLocalGlobalReport {
    pub kind: &'static str,
    pub e: u32,
    pub i: usize,
    pub global_chi: i64,
    pub global_betti: Vec<i64>,
    pub per_prime: Vec<PrimeChi>,
    pub max_local_chi: i64,
    pub max_local_betti_i: i64,
    pub sandwich: CheckResult,
}

/// Local-global comparison at one e: per-prime chi_i from localized
/// homology, the global mu-corrected value, and the two-sided bound
/// max_P chi_i(e,P) <= global <= max_P chi_i(e,P) + dim R. The global and
/// max-local Betti numbers are reported side by side without asserting
/// equality.
pub fn chi_local_global(
    m: &GradedModule,
    i: usize,
    e: u32,
    primes: &[PrimeSpec],
) -> Result<ChiLocalGlobalReport> {
    if primes.is_empty() {
        return Err(Error::Invalid("prime list must be nonempty".into()));
    }
    let ring = m.ring();
    let fe = pushforward_module(m, e)?;
    let res = free_resolution(&fe, i + 1, true)?;
    let global = global_chi(&res, i)?;
    let global_betti: Vec<i64> = (0..=i).map(|j| res.b(j) as i64).collect();
    let mut per_prime = Vec::new();
    for prime in primes {
        let report = betti_at_prime(&res, prime, i, e, 0)?;
        per_prime.push(PrimeChi {
            prime: prime.name().to_string(),
            chi: report.chi(i),
            betti: report.betti,
        });
    }
    let max_local_chi = per_prime.iter().map(|pc| pc.chi).max().unwrap();
    let max_local_betti_i = per_prime.iter().map(|pc| pc.betti[i]).max().unwrap();
    let d = ring.dimension()? as i64;
    let sandwich = CheckResult::new(
        "chi_local_global_sandwich",
        format!(
            "max_P chi_{i}({e},P) = {max_local_chi} <= global chi_{i}({e}) = {global} <= {max_local_chi} + dim R = {}",
            max_local_chi + d
        ),
        max_local_chi <= global && global <= max_local_chi + d,
    )
    .into_result()?;
    Ok(ChiLocalGlobalReport {
        kind: "CHI",
        e,
        i,
        global_chi: global,
        global_betti,
        per_prime,
        max_local_chi,
        max_local_betti_i,
        sandwich,
    })
}

/// Detected splitting rate from a finite a_e table: -1 when the table is
/// identically zero, otherwise the rounded base-p growth rate of the last
/// two positive entries, clamped to [0, gamma(R)]. A heuristic by necessity
/// at finite e; the raw table always travels with it.
pub fn detect_sr(table: &[(u32, u64)], p: u64, gamma_ring: usize) -> i64 {
    let positive: Vec<(u32, u64)> = table.iter().copied().filter(|&(_, a)| a > 0).collect();
    if positive.is_empty() {
        return -1;
    }
    let rate = if positive.len() == 1 {
        let (e, a) = positive[0];
        (a as f64).ln() / (p as f64).ln() / e as f64
    } else {
        let (e1, a1) = positive[positive.len() - 2];
        let (e2, a2) = positive[positive.len() - 1];
        ((a2 as f64 / a1 as f64).ln() / (p as f64).ln()) / (e2 - e1) as f64
    };
    (rate.round() as i64).clamp(0, gamma_ring as i64)
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitRow {
    pub e: u32,
    pub a_e: u64,
    pub normalized: String,
    pub normalized_f64: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PrimeSplitReport {
    pub prime: String,
    pub rows: Vec<(u32, u64)>,
    pub detected_sr: i64,
    pub r_f_estimate: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitRatioReport {
    pub kind: &'static str,
    pub rows: Vec<SplitRow>,
    pub detected_sr: i64,
    pub r_f_exact_at_emax: Option<String>,
    pub r_f_richardson: Option<f64>,
    pub per_prime: Vec<PrimeSplitReport>,
    pub checks: Vec<CheckResult>,
}

/// Global splitting numbers of M with detected rate and ratio estimate;
/// when primes are supplied, per-prime tables plus the finite-e instances
/// of the minimum formula and the Forster-Swan style bound.
pub fn splitting_ratio_report(
    m: &GradedModule,
    e_range: &[u32],
    primes: &[PrimeSpec],
) -> Result<SplitRatioReport> {
    let ring = m.ring();
    let p = ring.context().p();
    let gamma_ring = ring.gamma()?;
    let mut table: Vec<(u32, u64)> = Vec::new();
    for &e in e_range {
        table.push((e, module_splitting_number(m, e)?));
    }
    let sr = detect_sr(&table, p, gamma_ring);
    let mut rows = Vec::new();
    for &(e, a) in &table {
        let denom = if sr >= 0 {
            (q_power(p, e)? as i64).pow(sr as u32)
        } else {
            1
        };
        let normalized = Rational64::new(a as i64, denom.max(1));
        rows.push(SplitRow {
            e,
            a_e: a,
            normalized: rat_str(normalized),
            normalized_f64: rat_f64(normalized),
        });
    }
    let (r_f_exact_at_emax, r_f_richardson) = if sr < 0 {
        (Some("0".to_string()), Some(0.0))
    } else {
        let exact = rows.last().map(|r| r.normalized.clone());
        let richardson = if rows.len() >= 2 {
            let x1 = rows[rows.len() - 2].normalized_f64;
            let x2 = rows[rows.len() - 1].normalized_f64;
            Some((p as f64 * x2 - x1) / (p as f64 - 1.0))
        } else {
            None
        };
        (exact, richardson)
    };

    let mut checks: Vec<CheckResult> = Vec::new();
    // ring-level table for the supermultiplicativity inequality
    let m_max = PrimeSpec::irrelevant(ring)?;
    let mut ring_table: std::collections::BTreeMap<u32, u64> = std::collections::BTreeMap::new();
    for &e in e_range {
        ring_table.insert(e, splitting_number(ring, &m_max, e)?);
    }
    for &(e1, a1) in &table {
        for &(e2, a2) in &table {
            let _ = a2;
            let target = e1 + e2;
            if let (Some(&ae_sum), Some(&ring_a)) =
                (table.iter().find(|&&(e, _)| e == target).map(|(_, a)| a), ring_table.get(&e2))
            {
                checks.push(
                    CheckResult::new(
                        "supermultiplicativity",
                        format!(
                            "a_{target}(M) = {ae_sum} >= a_{e1}(M) a_{e2}(R) = {} ",
                            a1 * ring_a
                        ),
                        ae_sum >= a1 * ring_a,
                    )
                    .into_result()?,
                );
            }
        }
    }
    if sr == 0 {
        let nondecreasing = table.windows(2).all(|w| w[0].1 <= w[1].1);
        checks.push(
            CheckResult::new(
                "sr_zero_monotone",
                format!("detected sr = 0: a_e table {table:?} is non-decreasing"),
                nondecreasing,
            )
            .into_result()?,
        );
    }

    let mut per_prime = Vec::new();
    if !primes.is_empty() {
        let d = ring.dimension()? as i64;
        let mut min_sr: Option<i64> = None;
        for prime in primes {
            let mut prime_rows = Vec::new();
            for &e in e_range {
                prime_rows.push((e, module_splitting_number_at(m, e, prime)?));
            }
            let sr_p = detect_sr(&prime_rows, p, gamma_ring);
            min_sr = Some(min_sr.map_or(sr_p, |s: i64| s.min(sr_p)));
            let r_f = if sr_p >= 0 {
                prime_rows.last().map(|&(e, a)| {
                    rat_str(Rational64::new(
                        a as i64,
                        (q_power(p, e).unwrap() as i64).pow(sr_p as u32).max(1),
                    ))
                })
            } else {
                Some("0".to_string())
            };
            per_prime.push(PrimeSplitReport {
                prime: prime.name().to_string(),
                rows: prime_rows,
                detected_sr: sr_p,
                r_f_estimate: r_f,
            });
        }
        if let Some(min_sr) = min_sr {
            checks.push(
                CheckResult::new(
                    "sr_min_formula",
                    format!("detected sr(M) = {sr} <= min_P sr(M_P) = {min_sr}"),
                    sr <= min_sr,
                )
                .into_result()?,
            );
        }
        for &(e, a_global) in &table {
            let min_local = per_prime
                .iter()
                .map(|pp| pp.rows.iter().find(|&&(ee, _)| ee == e).unwrap().1)
                .min()
                .unwrap();
            checks.push(
                CheckResult::new(
                    "stafford_bound",
                    format!(
                        "a_{e}(M) = {a_global} >= min_P a_{e}(M_P) - dim R = {} - {d}",
                        min_local
                    ),
                    a_global as i64 >= min_local as i64 - d,
                )
                .into_result()?,
            );
        }
    }

    Ok(SplitRatioReport {
        kind: "SPLIT",
        rows,
        detected_sr: sr,
        r_f_exact_at_emax,
        r_f_richardson,
        per_prime,
        checks,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Stratum {
    pub sr: i64,
    pub primes: Vec<String>,
    pub min_r_f_estimate: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StrataReport {
    pub kind: &'static str,
    pub strata: Vec<Stratum>,
    pub localization_zero: Vec<String>,
    pub checks: Vec<CheckResult>,
}

/// Partition the supplied primes by detected splitting rate of M_P; report
/// the minimum ratio estimate per stratum, assert its positivity for
/// strata with sr >= 0, and check a_e-monotonicity along the containment
/// chains present in the list.
pub fn stratify_w(
    m: &GradedModule,
    primes: &[PrimeSpec],
    e_range: &[u32],
) -> Result<StrataReport> {
    if primes.is_empty() {
        return Err(Error::Invalid("prime list must be nonempty".into()));
    }
    let ring = m.ring();
    let p = ring.context().p();
    let gamma_ring = ring.gamma()?;
    let ann = m.annihilator()?;
    let mut checks = Vec::new();
    let mut localization_zero = Vec::new();
    let mut data: Vec<(usize, i64, Vec<(u32, u64)>)> = Vec::new();
    for (idx, prime) in primes.iter().enumerate() {
        // M_P = 0 iff ann(M) avoids P
        if !prime.ideal().contains_ideal(&ann)? {
            localization_zero.push(prime.name().to_string());
            continue;
        }
        let mut rows = Vec::new();
        for &e in e_range {
            rows.push((e, module_splitting_number_at(m, e, prime)?));
        }
        let sr_p = detect_sr(&rows, p, gamma_ring);
        data.push((idx, sr_p, rows));
    }
    let mut strata: std::collections::BTreeMap<i64, Vec<usize>> = std::collections::BTreeMap::new();
    for &(idx, sr_p, _) in &data {
        strata.entry(sr_p).or_default().push(idx);
    }
    let mut out_strata = Vec::new();
    for (&sr_val, members) in &strata {
        let mut min_rf: Option<f64> = None;
        if sr_val >= 0 {
            for &idx in members {
                let rows = &data.iter().find(|(i, _, _)| *i == idx).unwrap().2;
                if let Some(&(e, a)) = rows.last() {
                    let denom = (q_power(p, e)? as f64).powi(sr_val as i32);
                    let val = a as f64 / denom;
                    min_rf = Some(min_rf.map_or(val, |m: f64| m.min(val)));
                }
            }
            if let Some(min_rf) = min_rf {
                checks.push(
                    CheckResult::new(
                        "stratum_min_positive",
                        format!(
                            "stratum sr = {sr_val}: min normalized a_e = {min_rf} > 0"
                        ),
                        min_rf > 0.0,
                    )
                    .into_result()?,
                );
            }
        }
        out_strata.push(Stratum {
            sr: sr_val,
            primes: members
                .iter()
                .map(|&i| primes[i].name().to_string())
                .collect(),
            min_r_f_estimate: min_rf,
        });
    }
    // monotonicity along containment chains within a stratum
    for &(i1, sr1, ref rows1) in &data {
        for &(i2, sr2, ref rows2) in &data {
            if i1 == i2 || sr1 != sr2 {
                continue;
            }
            // Q = primes[i1] inside P = primes[i2]
            if primes[i2].contains_prime(&primes[i1])? && !primes[i1].contains_prime(&primes[i2])? {
                for (&(e, aq), &(_, ap)) in rows1.iter().zip(rows2.iter()) {
                    checks.push(
                        CheckResult::new(
                            "chain_lower_semicontinuity",
                            format!(
                                "{} inside {}: a_{e}(M_Q) = {aq} >= a_{e}(M_P) = {ap}",
                                primes[i1].name(),
                                primes[i2].name()
                            ),
                            aq >= ap,
                        )
                        .into_result()?,
                    );
                }
            }
        }
    }
    Ok(StrataReport {
        kind: "SPLIT",
        strata: out_strata,
        localization_zero,
        checks,
    })
}

/// Product-of-fields bookkeeping: factor k is a field with
/// [F_* L_k : L_k] = p^(alpha_k). The prime named by `factor` is the kernel
/// of the projection onto that factor, so the localization is the factor
/// itself.
#[derive(Debug, Clone, Serialize)]
pub struct FieldModel {
    pub p: u64,
    pub alphas: Vec<u32>,
}

impl FieldModel {
    pub fn new(p: u64, alphas: Vec<u32>) -> FieldModel {
        FieldModel { p, alphas }
    }

    pub fn gamma(&self) -> u32 {
        self.alphas.iter().copied().max().unwrap_or(0)
    }

    /// chi_i(e, P_k, R) for i <= 1: the localization is the field L_k, so
    /// beta_0 = p^(e alpha_k) and beta_1 = 0.
    pub fn chi(&self, e: u32, i: usize, factor: usize) -> Result<i64> {
        if factor >= self.alphas.len() {
            return Err(Error::Invalid("factor index out of range".into()));
        }
        if i > 1 {
            return Err(Error::Invalid(
                "field model only supports i <= 1".into(),
            ));
        }
        let beta0 = (self.p as i64).pow(e * self.alphas[factor]);
        Ok(match i {
            0 => beta0,
            _ => -beta0,
        })
    }

    /// Normalized limit chi_1^F(R_{P_k}, gamma): -1 on factors with
    /// alpha = gamma, 0 on the rest.
    pub fn normalized_chi1(&self, factor: usize, gamma: u32) -> Result<i64> {
        if factor >= self.alphas.len() {
            return Err(Error::Invalid("factor index out of range".into()));
        }
        if gamma < self.gamma() {
            return Err(Error::Invalid("gamma below gamma(R)".into()));
        }
        Ok(if self.alphas[factor] == gamma { -1 } else { 0 })
    }

    /// max over all primes of chi_1^F(R_P, gamma), and the max restricted
    /// to Z_{R,gamma} = factors with alpha = gamma.
    pub fn chi1_maxima(&self, gamma: u32) -> Result<(i64, Option<i64>)> {
        let mut max_all: Option<i64> = None;
        let mut max_z: Option<i64> = None;
        for k in 0..self.alphas.len() {
            let v = self.normalized_chi1(k, gamma)?;
            max_all = Some(max_all.map_or(v, |m: i64| m.max(v)));
            if self.alphas[k] == gamma {
                max_z = Some(max_z.map_or(v, |m: i64| m.max(v)));
            }
        }
        Ok((max_all.unwrap_or(0), max_z))
    }
}
