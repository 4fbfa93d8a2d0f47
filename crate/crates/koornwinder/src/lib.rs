//! Multivariable Askey-Wilson (Koornwinder) polynomials over exact rationals.
//!
//! The family is constructed from a commuting system of q-difference
//! operators: each polynomial is the triangular eigenfunction of the system
//! on a finite monomial basis, computed by exact linear algebra. On top of
//! the construction sit verifiers for the defining difference equations, the
//! parameter duality, the recurrence relations, and the norm formula, each
//! checked exactly where the data is rational and numerically (via torus
//! quadrature) where it is not.
//!
//! Modules, bottom up:
//! * [`scalar`], [`linalg`], [`qseries`]: exact rational arithmetic, dense
//!   solves, q-shifted factorials.
//! * [`params`]: validated parameter sets, duality map, spectral points.
//! * [`symfunc`]: partitions and hyperoctahedral monomial symmetric functions.
//! * [`diffops`]: the difference operators, their eigenvalues, and matrices.
//! * [`polys`]: polynomial construction, normalization, and the exact
//!   verifiers.
//! * [`quadrature`]: trapezoid quadrature on the torus for numeric
//!   orthogonality and norm checks.
//! * [`report`]: deterministic verification reports for the CLI.

pub mod diffops;
pub mod linalg;
pub mod params;
pub mod polys;
pub mod qseries;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod symfunc;
