//! Dense linear algebra over F_p: row reduction, rank and nullspace.
//! Used for graded-piece computations and as an independent cross-check
//! path in tests.

use crate::arith;

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let nrows = rows.len();
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..ncols {
        let mut sel = None;
        for i in r..nrows {
            if rows[i][c] % p != 0 {
                sel = Some(i);
                break;
            }
        }
        let i = match sel {
            Some(i) => i,
            None => continue,
        };
        rows.swap(r, i);
        let inv = arith::inv(rows[r][c] % p, p);
        for x in rows[r].iter_mut() {
            *x = arith::mul(*x % p, inv, p);
        }
        for i in 0..nrows {
            if i != r && rows[i][c] % p != 0 {
                let f = rows[i][c] % p;
                for cc in 0..ncols {
                    let sub = arith::mul(f, rows[r][cc], p);
                    rows[i][cc] = arith::sub(rows[i][cc] % p, sub, p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    rref(&mut m, p).len()
}

/// Basis of the right nullspace { v : rows * v = 0 }.
pub fn nullspace(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let ncols = rows.first().map(|r| r.len()).unwrap_or(0);
    if ncols == 0 {
        return Vec::new();
    }
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let pivots = rref(&mut m, p);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let free: Vec<usize> = (0..ncols).filter(|c| !pivot_set.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![0u64; ncols];
        v[f] = 1;
        for (r, &pc) in pivots.iter().enumerate() {
            // pivot row r: x_pc = -sum over free columns
            v[pc] = arith::neg(m[r][f] % p, p);
        }
        basis.push(v);
    }
    basis
}
