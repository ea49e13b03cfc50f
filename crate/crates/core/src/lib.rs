//! Numerical checks for the harmonic analysis behind rank-one reductions in
//! `SL₃`: Legendre and Gegenbauer inequalities, zonal averaging operators on
//! spheres, zig-zag chaining in the Weyl chamber of `SL₃(ℝ)`, and spectral
//! gaps of Cayley graphs of `SL₃(ℤ/nℤ)`.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cayley;
pub mod orthopoly;
pub mod sphere_ops;
pub mod weyl;
