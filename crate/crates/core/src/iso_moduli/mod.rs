//! Isomorphism testing, orbit ranks and the `j = 2` moduli space.

pub mod iso;
pub mod moduli;
pub mod orbit;
pub mod topology;

pub use iso::{are_isomorphic, hom_space, HomSpace, IsoBounds, IsoError, IsoStrategy, IsoVerdict};
pub use moduli::{
    classify_j2, discover_j2, DiscoveryConfig, DiscoveryReport, ModuliError, ModuliJ2Point,
    ProjectivePoint, ReferenceFamily,
};
pub use orbit::orbit_rank;
pub use topology::{are_separated, neighborhoods, BasicOpen};
