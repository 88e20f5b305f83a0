//! Exact computer algebra for rank-2 holomorphic bundles on blown-up surfaces.
//!
//! Bundles near the exceptional divisor are described by 2×2 transition
//! matrices on the two charts of the total space of `O(−k)`. The crate
//! computes splitting types, canonical forms with gauge certificates,
//! isomorphism verdicts, orbit ranks and the `j = 2` moduli classification,
//! plus the gluing layer that attaches local data to a base bundle.

pub mod algebra;
pub mod canonical;
pub mod certificate;
pub mod charts;
pub mod glue;
pub mod io;
pub mod iso_moduli;
pub mod sampling;
pub mod splitting;
pub mod transition;

pub use algebra::{GaussianRational, LaurentPoly, Mat2, Monomial, MPoly, Rational, UPoly};
pub use transition::{SplittingType, TransitionMatrix};
