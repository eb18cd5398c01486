//! Finite projective geometry over small fields.
//!
//! The crate covers the chain of structures needed to work with linear
//! complexes of `h`-subspaces in PG(n,q): exact arithmetic in GF(q) for
//! q ≤ 16, canonical subspaces and their lattice operations, exterior
//! algebra with Plücker coordinates, the complexes themselves together
//! with their null polarities and singular/total loci, line spreads and
//! line partitions of hyperplanes, and a search layer that scans spaces
//! of alternating trilinear forms for complexes of planes without
//! singular lines.

pub mod complexes;
pub mod exterior;
pub mod gf;
mod linalg;
pub mod partitions;
pub mod projspace;
pub mod search;
pub mod spreads;
pub mod verify;
