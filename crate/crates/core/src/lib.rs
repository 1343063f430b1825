//! Rate-region toolkit for the two-user discrete memoryless broadcast channel
//! with degraded message sets and a conference link from receiver 1 to
//! receiver 2 that may or may not be present.
//!
//! The crate is organised bottom-up:
//!
//! - [`prob`]: finite-alphabet pmfs, entropies and (conditional) mutual
//!   informations in bits.
//! - [`model`]: the channel law `P(y1,y2|x)`, auxiliary laws `p(u,v,x)` and the
//!   eight information functionals ([`MiVector`]) that parametrise both rate
//!   regions.
//! - [`polytope`]: small exact 3-D geometry (vertex enumeration, containment,
//!   convex hulls).
//! - [`regions`]: inner/outer polytopes, the special-case regions, union
//!   sampling and the vertex-level equivalence check.
//! - [`awgn`]: the closed-form Gaussian region over power splits.
//! - [`sim`]: Monte Carlo superposition coding with binning and
//!   joint-typicality decoding.
//! - [`cli`]: the `bcconf` command-line front end.
//!
//! Rates and information quantities are always in bits per channel use.

#![forbid(unsafe_code)]

pub mod awgn;
pub mod cli;
pub mod error;
pub mod exec;
pub mod model;
pub mod polytope;
pub mod prob;
pub mod regions;
pub mod sim;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{AuxJoint, ChannelLaw, ConferenceCapacity, MiVector};
pub use polytope::{HPolytope3, HalfSpace3, Hull, Tolerances, VertexSet};
pub use prob::{JointPmf, Pmf};
pub use regions::RateTriple;
