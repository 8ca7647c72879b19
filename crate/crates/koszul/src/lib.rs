//! Multigraded Koszul homology of monomial ideals.
//!
//! The library computes multigraded Betti numbers `beta_{i,a}(I) = dim_k
//! H_i(K(I))_a` of a monomial ideal `I` over a small prime field, together
//! with homology-cycle representatives. Three independent routes are
//! implemented and cross-checked:
//!
//! * a direct Koszul-complex oracle ([`oracle`]),
//! * a Taylor-complex oracle ([`oracle::taylor_betti`]),
//! * per-multidegree upper Koszul simplicial complexes ([`simplicial`]),
//!   driven over lcm-lattice candidates with Mayer-Vietoris long-exact-
//!   sequence shortcuts ([`lattice`]).
//!
//! [`families`] adds the generic/Scarf and quasi-stable/Pommaret special
//! cases.

pub mod families;
pub mod lattice;
pub mod linalg;
pub mod monomial;
pub mod oracle;
pub mod simplicial;

pub use lattice::{betti_table, BettiTable, CheckStats, EngineError, Strategy};
pub use monomial::{ExponentVector, MonomialIdeal};
