//! Adelic constructions: the adelic complex of divisors on the projective
//! line over a finite field, weak approximation, and local factors of the
//! affine plane along coordinate flags.

mod dim2;
mod p1;
mod ratfn;

pub use dim2::*;
pub use p1::{
    closed_points, cohomology_at_window, cohomology_p1, complete_at, global_sections, weak_approx, AdeleVector1,
    ClosedPointP1, CohomologyResult, DivisorP1, LocalExpansion,
};
pub use ratfn::{Expansion, RatFn};
