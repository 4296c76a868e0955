//! Exact matrix rank over the fraction field of S/P, P prime.
//!
//! Fraction-free row elimination: pivots are chosen sparsest-first, rows are
//! updated by cross-multiplication, and every entry is kept in normal form
//! against the Groebner basis of P so that zero tests are decisions in the
//! quotient domain. Rows may be scaled by any element outside P without
//! changing the rank, which licenses monomial-content removal and the
//! opportunistic exact division by the previous pivot that keeps entry
//! growth under control.

use super::IdealHandle;
use crate::arith;
use crate::error::Result;
use crate::poly::Polynomial;

/// Rank over Frac(S/P) of the matrix with the given rows. `prime` is the
/// ideal P (assumed prime); entries are reduced against it before and during
/// elimination.
pub fn generic_rank(rows: &[Vec<Polynomial>], prime: &IdealHandle) -> Result<usize> {
    let ctx = prime.context();
    let p = ctx.p();
    let mut mat: Vec<Vec<Polynomial>> = Vec::with_capacity(rows.len());
    for row in rows {
        let mut r = Vec::with_capacity(row.len());
        for entry in row {
            r.push(prime.normal_form(entry)?);
        }
        mat.push(r);
    }
    let nrows = mat.len();
    let ncols = mat.first().map(|r| r.len()).unwrap_or(0);
    let mut row_active = vec![true; nrows];
    let mut col_active = vec![true; ncols];
    let mut rank = 0usize;
    let mut prev_pivot: Option<Polynomial> = None;

    loop {
        // sparsest nonzero pivot: fewest terms, then lowest degree, then position
        let mut best: Option<(usize, u64, usize, usize)> = None;
        for i in 0..nrows {
            if !row_active[i] {
                continue;
            }
            for j in 0..ncols {
                if !col_active[j] || mat[i][j].is_zero() {
                    continue;
                }
                let nt = mat[i][j].terms().len();
                let dg = mat[i][j]
                    .terms()
                    .iter()
                    .map(|t| t.exps.iter().map(|&e| e as u64).sum())
                    .max()
                    .unwrap_or(0);
                let cand = (nt, dg, i, j);
                if best.map_or(true, |b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        let (pi, pj) = match best {
            None => return Ok(rank),
            Some((_, _, i, j)) => (i, j),
        };
        rank += 1;
        let pivot = mat[pi][pj].clone();
        for i in 0..nrows {
            if i == pi || !row_active[i] || mat[i][pj].is_zero() {
                continue;
            }
            let factor = mat[i][pj].clone();
            for j in 0..ncols {
                if !col_active[j] {
                    continue;
                }
                let new_entry = pivot.mul(&mat[i][j]).sub(&factor.mul(&mat[pi][j]));
                mat[i][j] = prime.normal_form(&new_entry)?;
            }
            debug_assert!(mat[i][pj].is_zero());
            cleanup_row(&mut mat[i], &col_active, prime, prev_pivot.as_ref(), p)?;
        }
        row_active[pi] = false;
        col_active[pj] = false;
        prev_pivot = Some(pivot);
    }
}

/// Scale a row by units of the localized domain: strip the common monomial
/// factor (valid when its variables avoid P), normalize the first nonzero
/// entry monic, and divide the whole row by the previous pivot when exact.
fn cleanup_row(
    row: &mut [Polynomial],
    col_active: &[bool],
    prime: &IdealHandle,
    prev_pivot: Option<&Polynomial>,
    p: u64,
) -> Result<()> {
    let ctx = prime.context().clone();
    let nvars = ctx.nvars();
    let live: Vec<usize> = (0..row.len())
        .filter(|&j| col_active[j] && !row[j].is_zero())
        .collect();
    if live.is_empty() {
        return Ok(());
    }
    // common monomial content across the live entries
    let mut content = vec![u32::MAX; nvars];
    for &j in &live {
        for t in row[j].terms() {
            for (c, &e) in content.iter_mut().zip(t.exps.iter()) {
                *c = (*c).min(e);
            }
        }
    }
    for i in 0..nvars {
        if content[i] > 0 && content[i] != u32::MAX {
            let xi = Polynomial::variable(&ctx, i);
            if prime.contains(&xi)? {
                content[i] = 0;
            }
        }
    }
    if content.iter().any(|&c| c > 0 && c != u32::MAX) {
        let content: Vec<u32> = content.iter().map(|&c| if c == u32::MAX { 0 } else { c }).collect();
        let divisor = Polynomial::monomial(&ctx, content, 1);
        for &j in &live {
            row[j] = row[j].div_exact(&divisor).expect("content divides");
        }
    }
    if let Some(d) = prev_pivot {
        if !d.is_constant() {
            let divided: Option<Vec<Polynomial>> =
                live.iter().map(|&j| row[j].div_exact(d)).collect();
            if let Some(divided) = divided {
                for (&j, q) in live.iter().zip(divided) {
                    row[j] = q;
                }
            }
        }
    }
    let lead = row[live[0]].leading_term().unwrap().coeff;
    if lead != 1 {
        let inv = arith::inv(lead, p);
        for &j in &live {
            row[j] = row[j].scale(inv);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, MonomialOrder, PolyContext};
    use std::sync::Arc;

    fn setup(p: u64, vars: &[&str]) -> Arc<PolyContext> {
        PolyContext::new(p, vars, MonomialOrder::Grevlex).unwrap()
    }

    fn mat(ctx: &Arc<PolyContext>, rows: &[&[&str]]) -> Vec<Vec<Polynomial>> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_polynomial(ctx, s).unwrap())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rank_examples() {
        let c = setup(5, &["y"]);
        let zero = IdealHandle::zero(&c);
        assert_eq!(generic_rank(&mat(&c, &[&["y"]]), &zero).unwrap(), 1);
        assert_eq!(
            generic_rank(&mat(&c, &[&["y", "y^2"], &["1", "y"]]), &zero).unwrap(),
            1
        );
        // all entries in P
        let py = IdealHandle::new(&c, vec![parse_polynomial(&c, "y").unwrap()]);
        assert_eq!(
            generic_rank(&mat(&c, &[&["y", "y^2"], &["y^3", "y"]]), &py).unwrap(),
            0
        );
    }

    #[test]
    fn rank_over_quotient_domain() {
        // modulo x^2 - yz the rows (x, y) and (xz, yz) are proportional
        let c = setup(3, &["x", "y", "z"]);
        let prime = IdealHandle::new(&c, vec![parse_polynomial(&c, "x^2 - y*z").unwrap()]);
        let m = mat(&c, &[&["x", "y"], &["x*z", "y*z"]]);
        assert_eq!(generic_rank(&m, &prime).unwrap(), 1);
        let m2 = mat(&c, &[&["x", "y"], &["y", "x"]]);
        assert_eq!(generic_rank(&m2, &prime).unwrap(), 2);
    }

    #[test]
    fn rank_invariances() {
        let c = setup(7, &["x", "y"]);
        let zero = IdealHandle::zero(&c);
        let base = mat(&c, &[&["x", "y", "x+y"], &["y", "x", "0"], &["x+y", "x+y+x", "x+y"]]);
        let r = generic_rank(&base, &zero).unwrap();
        // row permutation
        let perm = vec![base[2].clone(), base[0].clone(), base[1].clone()];
        assert_eq!(generic_rank(&perm, &zero).unwrap(), r);
        // column permutation
        let colperm: Vec<Vec<Polynomial>> = base
            .iter()
            .map(|row| vec![row[1].clone(), row[2].clone(), row[0].clone()])
            .collect();
        assert_eq!(generic_rank(&colperm, &zero).unwrap(), r);
        // scaling a row by an element outside P
        let scale = parse_polynomial(&c, "x^2 + 1").unwrap();
        let mut scaled = base.clone();
        scaled[1] = scaled[1].iter().map(|e| e.mul(&scale)).collect();
        assert_eq!(generic_rank(&scaled, &zero).unwrap(), r);
    }
}
