//! Exact computer algebra for the symmetric 6×6 determinantal presentation of
//! canonical rings of étale double covers of ℤ/2-Godeaux surfaces.
//!
//! The pipeline builds the matrix ansatz ([`alpha`]), generates the rank
//! condition coefficient system ([`rc`]), solves it by staged linear
//! elimination ([`elim`]), and produces surface equations ([`surface`]).
//! [`verify`] machine-checks the supporting polynomial identities.

#![allow(clippy::type_complexity)]

pub mod alpha;
pub mod elim;
pub mod pipeline;
pub mod rc;
pub mod resources;
pub mod ring;
pub mod surface;
pub mod verify;
