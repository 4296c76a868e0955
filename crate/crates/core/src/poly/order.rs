//! Monomial orders on exponent vectors.

use std::cmp::Ordering;

/// Total order on monomials, compatible with multiplication.
///
/// `Elim { n_aux }` compares the total degree of the last `n_aux` variables
/// first and falls back to grevlex on the full vector; monomials free of the
/// auxiliary block are smaller than any monomial meeting it, which is the
/// elimination property used by `intersect`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonomialOrder {
    Grevlex,
    Lex,
    GradedLex,
    Elim { n_aux: usize },
}

impl MonomialOrder {
    pub fn parse(s: &str) -> Option<MonomialOrder> {
        match s {
            "grevlex" => Some(MonomialOrder::Grevlex),
            "lex" => Some(MonomialOrder::Lex),
            "graded-lex" | "grlex" => Some(MonomialOrder::GradedLex),
            _ => None,
        }
    }

    pub fn cmp_exps(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match self {
            MonomialOrder::Lex => cmp_lex(a, b),
            MonomialOrder::GradedLex => total(a).cmp(&total(b)).then_with(|| cmp_lex(a, b)),
            MonomialOrder::Grevlex => cmp_grevlex(a, b),
            MonomialOrder::Elim { n_aux } => {
                let n = a.len() - n_aux;
                total(&a[n..])
                    .cmp(&total(&b[n..]))
                    .then_with(|| cmp_grevlex(a, b))
            }
        }
    }
}

#[inline]
fn total(a: &[u32]) -> u64 {
    a.iter().map(|&e| e as u64).sum()
}

fn cmp_lex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

fn cmp_grevlex(a: &[u32], b: &[u32]) -> Ordering {
    match total(a).cmp(&total(b)) {
        Ordering::Equal => {}
        o => return o,
    }
    // last nonzero coordinate of a - b negative => a greater
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return if a[i] < b[i] {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
    }
    Ordering::Equal
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_ties_break_on_last_variable() {
        // x^2 vs yz in (x, y, z): same degree, x^2 wins
        let o = MonomialOrder::Grevlex;
        assert_eq!(o.cmp_exps(&[2, 0, 0], &[0, 1, 1]), Ordering::Greater);
        assert_eq!(o.cmp_exps(&[1, 1, 0], &[0, 2, 0]), Ordering::Greater);
        assert_eq!(o.cmp_exps(&[0, 0, 2], &[1, 1, 0]), Ordering::Less);
    }

    #[test]
    fn lex_vs_grlex() {
        let lex = MonomialOrder::Lex;
        // x > y^5 under lex
        assert_eq!(lex.cmp_exps(&[1, 0], &[0, 5]), Ordering::Greater);
        let grlex = MonomialOrder::GradedLex;
        assert_eq!(grlex.cmp_exps(&[1, 0], &[0, 5]), Ordering::Less);
    }

    #[test]
    fn elim_block_dominates() {
        // two base vars, one aux var at the end
        let o = MonomialOrder::Elim { n_aux: 1 };
        // t > x^9 y^9
        assert_eq!(o.cmp_exps(&[0, 0, 1], &[9, 9, 0]), Ordering::Greater);
        // within t-free monomials, grevlex
        assert_eq!(o.cmp_exps(&[2, 0, 0], &[1, 1, 0]), Ordering::Greater);
    }
}
