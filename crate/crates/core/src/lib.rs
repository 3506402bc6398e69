//! Cross-Kerr coupling between the vibrational modes of two trapped ions.
//!
//! Two identical ions in a linear trap have a stretch mode at ω_s = √3·ω_z and
//! two degenerate rocking modes at ω_r = √(ω_⊥² − ω_z²). The cubic and quartic
//! terms of the Coulomb interaction couple them through an effective
//! Hamiltonian ħχ n̂_r n̂_s. This crate computes χ three independent ways:
//!
//! * [`analytics`]: closed forms for the energy shifts and for χ, together
//!   with the earlier formula whose leading bracket term is 1 instead of ½;
//! * [`pt`]: automated first/second-order perturbation theory over the
//!   ladder-operator algebra of [`fock`];
//! * [`oracle`]: exact diagonalization of the truncated anharmonic
//!   Hamiltonian with a small-ξ extrapolation.
//!
//! [`trap`] turns physical inputs into the mode spectrum; [`io`] holds the
//! configuration format, CSV schemas and the report generators behind the
//! `ionkerr` binary.

pub mod analytics;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod io;
pub mod oracle;
pub mod pt;
pub mod trap;

pub use error::{Error, Result};
pub use fock::{Cutoffs, FockState, Mode, OperatorSum};
pub use trap::{derive_spectrum, DimensionlessParams, IonSpecies, ModeSpectrum, PhysicalConstants, TrapConfig};
