//! Discovery and exact certification of monotone quantities for curvature
//! flows of convex surfaces.

pub mod ratpoly;
pub mod sturm;
pub mod evolution;
pub mod catalog;
pub mod sieve;
pub mod flowsim;
