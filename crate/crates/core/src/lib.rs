//! Wigner quasi-probability distributions for quantum systems whose
//! configuration space is a finite group of odd order.
//!
//! The pieces fit together as follows:
//!
//! - [`group`]: finite groups as multiplication tables (cyclic, metacyclic,
//!   arbitrary Cayley tables), conjugacy classes and element orders.
//! - [`midpoint`]: the unique square root `s0(g)` in an odd-order group and
//!   the midpoint `s(g', g'') = g' s0(g'⁻¹ g'')`.
//! - [`repr`]: unitary irreducible representations and their
//!   orthogonality/completeness checks.
//! - [`fourier`]: the group Fourier transform `ψ(g) ↔ ψ_{JMN}`.
//! - [`wigner`]: the distribution `W(g; J M N M' N')`, its marginals,
//!   translation laws, the contracted `W̃` and the traciality pairing.
//! - [`order21`]: the superposition example on `Z_7 ⋊ Z_3`.
//! - [`suite`]: the property suite behind the `verify` command.
//!
//! ```
//! use oddwigner::{Basis, FiniteGroup, PhaseSpace, Wavefunction};
//!
//! let group = FiniteGroup::metacyclic(7, 3, 2).unwrap();
//! let space = PhaseSpace::with_basis(group, Basis::Paper).unwrap();
//! let w = space.wigner_pure(&Wavefunction::uniform(21)).unwrap();
//! let marginal = w.marginal_position();
//! assert!(marginal.values.iter().all(|p| (p - 1.0 / 21.0).abs() < 1e-12));
//! ```

pub mod error;
pub mod fourier;
pub mod group;
pub mod midpoint;
pub mod order21;
pub mod random;
pub mod report;
pub mod repr;
pub mod suite;
pub mod wigner;

pub use error::{Error, Result};
pub use fourier::{forward, inverse, MomentumWavefunction, StateDocument, Wavefunction};
pub use group::{ConjugacyPartition, Element, FiniteGroup, GroupKind, GroupSpec};
pub use midpoint::{midpoint, verify_midpoint_axioms, MidpointMap, SamplingPlan, SquareRootMap};
pub use report::{Check, Report};
pub use repr::{verify_irrep_set, Basis, Irrep, IrrepDocument, IrrepSet};
pub use wigner::{
    cyclic_wigner, AuxiliaryWigner, DensityOperator, Layout, PhaseSpace, WignerDocument, WignerTable,
};
