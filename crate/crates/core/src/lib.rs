//! Certified Mordell-Weil rank bounds for jacobians of hyperelliptic curves
//! `y^2 = f(x)` in two families: simplest cubics and the real cyclotomic
//! polynomials attached to Sophie Germain primes.

pub mod arith;
pub mod bounds;
pub mod cli;
pub mod error;
pub mod f2;
pub mod field;
pub mod signatures;

pub use error::{Error, Result};
