//! Shared numeric tolerances.

/// Relative tolerance for floating-point equality of distances and resistances.
pub const TAU_EQ: f64 = 1e-9;

/// Relative slack when admitting a path as a geodesic under inexact sums.
pub const TAU_GEO: f64 = 1e-12;

/// Bound on the Laplacian residual of a unit-current potential.
pub const TAU_HARM: f64 = 1e-8;
