//! Fusion rings built from finite group data, NIM-rep classification for the
//! two supported families, and a brute-force search oracle for cross-checking.

pub mod catalog;
pub mod glm;
pub mod graph;
pub mod group;
pub mod jl;
pub mod matrix;
pub mod nimrep;
pub mod oracle;
pub mod perm;
pub mod ring;

pub use group::{FiniteGroup, GroupError, Subgroup};
pub use matrix::IntMatrix;
pub use nimrep::{are_isomorphic, nimrep_from_matrices, NimRep, NimRepError};
pub use perm::Perm;
pub use ring::{FusionRing, RingElement, RingError, RingKind};
