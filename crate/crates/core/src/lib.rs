//! Hypergeometric monodromy groups viewed as classical Schottky groups of
//! genus 2.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure numerics:
//!
//! * [`sphere`]: points of the Riemann sphere and Moebius maps.
//! * [`disk`]: closed generalized disks as Hermitian forms, exact transport.
//! * [`special`]: complex Gamma, circuit and connection matrices, the
//!   fixed points of the monodromy generators and the function `g`.
//! * [`apollonius`]: concentric centers of a disk pair and the Apollonius
//!   family of loxodromic maps pairing two disks.
//! * [`schottky`]: four-disk configurations, their numerical certificate,
//!   separating circles and orbit sampling.
//! * [`loops`]: the four deformation loops, their profiles, audits and
//!   tracer.
//!
//! File formats, figures and the command line live in the companion
//! `hgschottky-cli` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod apollonius;
pub mod disk;
mod error;
pub mod loops;
pub mod schottky;
pub mod special;
pub mod sphere;
pub(crate) mod winding;

pub use num_complex::Complex64;

pub use error::Error;

pub use apollonius::{ApolloniusData, ConcentricPair, PhaseOrPoint};
pub use disk::{Containment, Disjointness, GeneralizedDisk};
pub use loops::{LoopKind, LoopProfile, LoopReport};
pub use schottky::{Certificate, SchottkyConfig};
pub use special::{AngleTriple, HGParams};
pub use sphere::{Classification, Mat2, MoebiusMap, SpherePoint};

pub type Result<T, E = Error> = core::result::Result<T, E>;
