//! Exact polynomial and sequence algebra over the integers and rationals.

pub mod bm;
pub mod charvalues;
pub mod cyclotomic;
pub mod factor;
pub mod intpoly;
pub mod roots;

pub use bm::{berlekamp_massey, berlekamp_massey_int, MinimalRecurrence};
pub use charvalues::{newton_power_sums, poly_from_power_sums, power_sums_of_poly, CharValueSet, PowerSumSeq};
pub use cyclotomic::{alpha_transform, cyclotomic, divisors, euler_phi, factor_x2t_minus_2t, mobius, theta, theta_factors};
pub use factor::factor_monic;
pub use intpoly::IntPoly;
