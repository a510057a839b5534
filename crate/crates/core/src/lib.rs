//! Exact modular data of rational subregular W-algebras in simply-laced types.
//!
//! The crate is organised bottom-up: [`rootsystem`] and [`weyl`] supply the
//! combinatorics, [`cyclotomic`] the number field, [`admissible`] the module
//! labels, [`smatrix`] the exact S-matrices, [`fusion`] the Verlinde rings and
//! [`numerology`] the scalar invariants. [`reference`] bundles transcribed
//! tables used by the verification pipeline.

pub mod admissible;
pub mod cyclotomic;
pub mod error;
pub mod fusion;
pub mod numerology;
pub mod reference;
pub mod rootsystem;
pub mod smatrix;
pub mod weyl;

pub use error::{Error, Result};

/// Exact rational used for weights and scalar invariants.
pub type Q = num_rational::Rational64;

/// Formats a rational as `a` or `a/b`.
pub fn fmt_q(x: &Q) -> String {
    if *x.denom() == 1 {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `a` or `a/b`.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let a: i64 = a.trim().parse().map_err(|_| bad())?;
            let b: i64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            Ok(Q::new(a, b))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}
