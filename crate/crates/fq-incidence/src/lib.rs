//! Point-variety incidence structures over finite fields, verified with
//! exact arithmetic.
//!
//! The crate builds the bipartite incidence graph between all points of
//! F_q^{n+d} and a q^{d(n+1)}-member family of graph varieties, and then
//! certifies its full spectral structure without a single floating-point
//! operation:
//!
//! * [`gf`] — table-based arithmetic in F_{p^m}, the trace map, power-map
//!   permutations, and the canonical element index every report derives from;
//! * [`chr`] — the cyclotomic integers Z\[zeta_p\] and additive characters;
//! * [`variety`] — the variety families, their flat and paraboloid
//!   specializations, enumeration and membership;
//! * [`incidence`] — the 0/1 incidence matrix, incidence counting, and the
//!   two Gram matrices with closed-form entry cross-checks;
//! * [`spectral`] — annihilating-polynomial, multiplicity, and character
//!   eigenvector certificates, plus exact rational spectral projectors;
//! * [`bounds`] — square-root-free evaluation of the incidence bounds and
//!   Gaussian binomials;
//! * [`flats`] — the census of all n-flats, affine-group actions, and
//!   point-flat incidence experiments;
//! * [`pinned`] — pinned distance sets and their incidence-chain identity;
//! * [`cli`] / [`grid`] — the batch experiment runner with deterministic
//!   seeding and machine-readable JSON reports.
//!
//! Start with the runnable examples (`cargo run --example spectrum_certificates`
//! and friends); each one walks through a single capability end to end.

pub mod bounds;
pub mod chr;
pub mod cli;
pub mod flats;
pub mod gf;
pub mod grid;
pub mod incidence;
pub mod linalg;
pub mod pinned;
pub mod sampling;
pub mod spectral;
pub mod variety;
