//! Exact computation of finite-e Frobenius invariants — Hilbert–Kunz
//! functions, Frobenius Betti and Euler characteristic tables, splitting
//! ideals, numbers and primes, splitting rate and F-splitting ratio — for
//! finitely generated graded algebras over prime fields, together with the
//! structural inequality checks that relate the local and global values.

pub mod arith;
pub mod error;
pub mod frob;
pub mod gb;
pub mod invariants;
pub mod linalg;
pub mod poly;
pub mod resolve;
pub mod split;
pub mod ring;

pub use error::{Error, Result};
