//! Nonlinear algebraic-geometry codes over small finite fields: Goppa
//! evaluation codes, derivative-evaluation codes with ball-centered
//! selection, rational-section codes on P^1 and their combination, plus
//! exact brute-force verification and high-precision asymptotic bounds.

pub mod bounds;
pub mod center;
pub mod code;
pub mod combined;
pub mod curve;
pub mod error;
pub mod extension;
pub mod field;
pub mod goppa;
pub mod harness;
pub mod poly;
pub mod rational;
pub mod section;
pub mod xing;

pub use error::{Error, Result};
