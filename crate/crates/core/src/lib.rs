//! Normal bases of Galois extensions of commutative rings, computed exactly
//! through the group ring.
//!
//! An element `u` of a Galois extension `S/R` with finite group `G`
//! generates a normal basis exactly when `U = Σ u^g g⁻¹` is a unit of the
//! group ring `SG`. Around that test this crate builds dual generators,
//! self-dual normal bases for abelian groups of odd order, and descent to
//! fixed subrings `S^H`.

pub mod galois;
pub mod group_ring;
pub mod groups;
pub mod normal_basis;
pub mod oracle;
pub mod rings;
pub mod verify;
