//! Exact certification that the moduli space of `n`-nodal genus-`g` curves
//! is of general type, by decomposing its canonical class into effective
//! divisor classes plus a positive multiple of `psi`.

pub mod catalog;
pub mod certifier;
pub mod feasibility;
pub mod known;
pub mod numeric;
pub mod picard;
pub mod tables;

pub use catalog::{DivisorName, Divisor};
pub use certifier::{certify, verify, Certificate, Pipeline};
pub use numeric::Rational;
pub use picard::{Generator, SpaceParams};
