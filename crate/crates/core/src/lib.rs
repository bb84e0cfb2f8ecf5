//! A desk-scale laboratory for the interplay between graph spectra,
//! CAT(0) geometry and random groups.
//!
//! The crate is organised around a chain of machinery:
//!
//! * [`graph`] — finite connected graphs with their standard random walk,
//!   spectral gap, girth/diameter and path-counting primitives.
//! * [`families`] — named graph families: LPS Ramanujan graphs `X^{p,q}`
//!   and incidence graphs of projective planes `PG(2,r)`.
//! * [`cat0`] — concrete CAT(0) models (Euclidean space, metric trees,
//!   metric cones over edge-length graphs) with distances, geodesics,
//!   tangent cones and barycenters.
//! * [`energy`] — n-step energies of equivariant maps of free groups,
//!   the inequality suite relating them, the affine averaging operator,
//!   and discrete fixed-point descent.
//! * [`invariants`] — Gram-matrix embeddings of cones, radial distortion,
//!   the δ-invariant bounds, Wang invariants and Euclidean-building tables.
//! * [`random_group`] — S-labellings of graphs, push-forward walks, the
//!   weighted-sum decomposition, Bernoulli tail bounds and the
//!   fixed-point pipeline constants.
//!
//! Everything is pure and deterministic: stochastic experiments take an
//! explicit seed, and repeated runs produce identical results.

pub mod cat0;
pub mod energy;
pub mod error;
pub mod families;
pub mod graph;
pub mod invariants;
pub mod io;
pub mod linalg;
pub mod random_group;

pub use error::{Error, Result};
