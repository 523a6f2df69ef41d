//! Barcodes of filtered chain complexes and growth statistics of dynamical
//! systems.
//!
//! The crate has four computational pillars:
//!
//! * [`persistence`] — filtered complexes over F2, barcode extraction by
//!   column reduction and by rank-formula multiplicities, the barcode
//!   counting function b_eps(s), and bottleneck distances.
//! * [`novikov`] — filtered complexes over the Novikov field with F2
//!   coefficients: unpinned barcodes, Floer graphs and eps-isolated counts,
//!   duality and tensor products.
//! * [`dynamics`] — concrete systems (torus linear maps, circle doubling,
//!   rotations, shifts) with separated/covering counts, topological-entropy
//!   and volume-growth estimates, exact periodic counts and linear shadowing.
//! * [`crofton`] + [`toric`] — tomograph families with Monte Carlo Crofton
//!   integrals and push-forward densities, and exact combinatorial models for
//!   toric growth bounds.
//!
//! [`growth`] carries the shared rate/degree fitting, [`verify`] the
//! acceptance checks wired into both `cargo test` and the `bardyn verify`
//! subcommand.

pub mod crofton;
pub mod dynamics;
pub mod error;
pub mod f2;
pub mod growth;
pub mod io;
pub mod novikov;
pub mod persistence;
pub mod rng;
pub mod toric;
pub mod verify;

pub use error::Error;
