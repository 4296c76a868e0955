//! Text grammar for polynomials: `^` for powers, `*` optional between
//! factors, integer coefficients, `+`/`-` and parentheses.

use super::{Polynomial, PolyContext};
use crate::error::{Error, Result};
use std::sync::Arc;

pub fn parse_polynomial(ctx: &Arc<PolyContext>, text: &str) -> Result<Polynomial> {
    let mut parser = Parser {
        ctx,
        bytes: text.as_bytes(),
        pos: 0,
    };
    parser.skip_ws();
    let poly = parser.expr()?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    ctx: &'a Arc<PolyContext>,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Polynomial> {
        let mut negate = false;
        if let Some(c) = self.peek() {
            if c == b'-' {
                self.pos += 1;
                self.skip_ws();
                negate = true;
            } else if c == b'+' {
                self.pos += 1;
                self.skip_ws();
            }
        }
        let mut acc = self.product()?;
        if negate {
            acc = acc.neg();
        }
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    self.skip_ws();
                    let t = self.product()?;
                    acc = acc.add(&t);
                }
                Some(b'-') => {
                    self.pos += 1;
                    self.skip_ws();
                    let t = self.product()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Polynomial> {
        let mut acc = self.power()?;
        loop {
            self.skip_ws();
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    self.skip_ws();
                    let f = self.power()?;
                    acc = acc.mul(&f);
                }
                // juxtaposition: a factor can start right after the last one
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' || c == b'_' => {
                    let f = self.power()?;
                    acc = acc.mul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Polynomial> {
        let base = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            if n >= super::MAX_EXPONENT {
                return Err(Error::ExponentOverflow(n));
            }
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr()?;
                self.skip_ws();
                if self.peek() != Some(b')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Polynomial::constant(self.ctx, n % self.ctx.p()))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .peek()
                    .map(|c| c.is_ascii_alphanumeric() || c == b'_')
                    .unwrap_or(false)
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                match self.ctx.var_index(name) {
                    Some(i) => Ok(Polynomial::variable(self.ctx, i)),
                    None => Err(Error::UnknownVariable(name.to_string())),
                }
            }
            _ => Err(self.error("expected a coefficient, variable or `(`")),
        }
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().map(|c| c.is_ascii_digit()).unwrap_or(false) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.error("integer out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;

    fn ctx3() -> Arc<PolyContext> {
        PolyContext::new(3, &["x", "y", "z"], MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn negative_coefficients_reduce_mod_p() {
        let ctx = ctx3();
        let f = parse_polynomial(&ctx, "x^2 - y*z").unwrap();
        // -1 = 2 mod 3
        assert_eq!(f.to_string(), "x^2 + 2*y*z");
    }

    #[test]
    fn zero_and_cancellation() {
        let ctx = PolyContext::new(2, &["x"], MonomialOrder::Grevlex).unwrap();
        assert!(parse_polynomial(&ctx, "0").unwrap().is_zero());
        let f = parse_polynomial(&ctx, "x+ x").unwrap();
        assert_eq!(f.to_string(), "0");
    }

    #[test]
    fn roundtrip_identity() {
        let ctx = ctx3();
        for text in [
            "x^2 + 2*y*z",
            "x*y*z + 2*z^3 + 1",
            "x^5 + x^2*y^2 + 2",
            "0",
        ] {
            let f = parse_polynomial(&ctx, text).unwrap();
            let g = parse_polynomial(&ctx, &f.to_string()).unwrap();
            assert_eq!(f, g);
        }
    }

    #[test]
    fn juxtaposition_and_parens() {
        let ctx = ctx3();
        let a = parse_polynomial(&ctx, "2x y^2").unwrap();
        let b = parse_polynomial(&ctx, "2*x*y^2").unwrap();
        assert_eq!(a, b);
        let c = parse_polynomial(&ctx, "(x + y)(x - y)").unwrap();
        let d = parse_polynomial(&ctx, "x^2 - y^2").unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn errors_carry_position() {
        let ctx = ctx3();
        match parse_polynomial(&ctx, "x + w") {
            Err(Error::UnknownVariable(v)) => assert_eq!(v, "w"),
            other => panic!("expected unknown variable, got {other:?}"),
        }
        match parse_polynomial(&ctx, "x + ") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
